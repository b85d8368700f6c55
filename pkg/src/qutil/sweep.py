"""Seed-unique parameter expansion, per-run evaluation and utilization tables."""

from __future__ import annotations

import dataclasses
import hashlib
import itertools
import json
import logging
import multiprocessing as mp
import time
from concurrent.futures import ProcessPoolExecutor
from concurrent.futures.process import BrokenProcessPool
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .architecture import ArchitectureSpec, load_architecture
from .circuit import active_qubits
from .errors import ConfigurationError, ConsistencyError
from .generator import GenerationConfig, format_ratio, generate
from .rng import XorShift64Star
from .transpiler import DEFAULT_SABRE, LAYOUT_METHODS, SabreOptions, TranspileConfig, transpile

log = logging.getLogger(__name__)


# Reference grid: 3 widths x 2 depths x 3 ratios x 2 levels x 3 layouts = 108 groups.
REFERENCE_QUBITS = (6, 11, 16)
REFERENCE_DEPTHS = (20, 40)
REFERENCE_RATIOS = ((4, 1), (1, 1), (1, 4))
REFERENCE_LEVELS = (1, 2)
REFERENCE_LAYOUTS = ("trivial", "dense", "sabre")


@dataclass(frozen=True)
class SweepConfig:
    archs: tuple[str, ...]
    qubits: tuple[int, ...]
    depths: tuple[int, ...]
    ratios: tuple[tuple[int, int], ...]
    levels: tuple[int, ...]
    layouts: tuple[str, ...]
    mg: int = 1
    mt: int = 1
    global_seed: int = 0
    trivial_first: bool = True
    vf2: bool = True
    seed_trivial_trial: bool = True
    sabre: SabreOptions = field(default=DEFAULT_SABRE)

    @property
    def samples(self) -> int:
        return self.mg * self.mt

    def validate(self) -> None:
        for name in ("archs", "qubits", "depths", "ratios", "levels", "layouts"):
            if not getattr(self, name):
                raise ConfigurationError(f"sweep grid '{name}' is empty")
        if self.sabre.layout_trials < 1 or self.sabre.layout_iterations < 0 or self.sabre.decay_reset < 1:
            raise ConfigurationError("SABRE trials and decay reset must be >= 1, iterations >= 0")
        if self.mg < 1 or self.mt < 1:
            raise ConfigurationError("mg and mt must both be >= 1")
        for L in self.layouts:
            if L not in LAYOUT_METHODS:
                raise ConfigurationError(f"unknown layout method {L!r}")
        for O in self.levels:
            if O not in (0, 1, 2, 3):
                raise ConfigurationError(f"optimization level must be 0-3, got {O}")
        for ref in self.archs:
            arch = _arch(ref)
            for q in self.qubits:
                if q > arch.n:
                    raise ConfigurationError(f"q={q} exceeds the {arch.n} qubits of {ref}")
        for q, d, r in itertools.product(self.qubits, self.depths, self.ratios):
            GenerationConfig(q, d, r).validate()

    def fingerprint(self) -> str:
        doc = json.dumps(self.to_json(), sort_keys=True)
        return hashlib.sha256(doc.encode()).hexdigest()[:16]

    def to_json(self) -> dict:
        return {
            "archs": list(self.archs),
            "qubits": list(self.qubits),
            "depths": list(self.depths),
            "ratios": [format_ratio(r) for r in self.ratios],
            "opt_levels": list(self.levels),
            "layouts": list(self.layouts),
            "mg": self.mg,
            "mt": self.mt,
            "samples": self.samples,
            "global_seed": self.global_seed,
            "trivial_first": self.trivial_first,
            "vf2": self.vf2,
            "seed_trivial_trial": self.seed_trivial_trial,
            "sabre": dataclasses.asdict(self.sabre),
        }


@dataclass(frozen=True)
class ParameterSet:
    arch_ref: str
    G: GenerationConfig
    T: TranspileConfig
    ordinal: int
    sweep: str = ""

    @property
    def seeds(self) -> tuple[int, int]:
        return self.G.seed, self.T.seed

    @property
    def group(self) -> "GroupKey":
        return GroupKey(self.arch_ref, self.G.q, self.G.d, self.G.r, self.T.O, self.T.L)


class GroupKey(NamedTuple):
    arch: str
    q: int
    d: int
    r: tuple[int, int]
    O: int
    L: str


@lru_cache(maxsize=None)
def _arch(ref: str) -> ArchitectureSpec:
    return load_architecture(ref)


def expand_parameters(cfg: SweepConfig) -> list[ParameterSet]:
    """Every (arch, q, d, r, O, L) combination, ``mg * mt`` times, with fresh seeds.

    Per architecture the seed stream restarts from the global seed; within it
    the combinations are visited in (q, d, r, O, L) product order and each
    repetition takes two consecutive draws: generation seed, then
    transpilation seed.
    """
    cfg.validate()
    tag = cfg.fingerprint()
    out: list[ParameterSet] = []
    for ref in cfg.archs:
        rng = XorShift64Star(cfg.global_seed)
        for q, d, r, O, L in itertools.product(cfg.qubits, cfg.depths, cfg.ratios, cfg.levels, cfg.layouts):
            for _ in range(cfg.samples):
                gs = rng.next_u64()
                ts = rng.next_u64()
                out.append(
                    ParameterSet(
                        ref,
                        GenerationConfig(q, d, r, gs),
                        TranspileConfig(
                            O=O,
                            L=L,
                            seed=ts,
                            trivial_first=cfg.trivial_first,
                            vf2=cfg.vf2,
                            seed_trivial_trial=cfg.seed_trivial_trial,
                            sabre=cfg.sabre,
                        ),
                        len(out),
                        tag,
                    )
                )
    return out


def evaluate(p: ParameterSet) -> frozenset[int]:
    """Generate, transpile and return the physical qubits that carry instructions."""
    arch = _arch(p.arch_ref)
    circ = generate(p.G)
    res = transpile(circ, arch, p.T)
    cm = arch.coupling
    basis = arch.basis
    for ins in res.circuit.instructions:
        if ins.kind not in basis:
            raise ConsistencyError(f"run {p.ordinal}: non-basis kind {ins.kind} in output")
        if len(ins.qubits) == 2 and not cm.coupled(*ins.qubits):
            raise ConsistencyError(f"run {p.ordinal}: {ins.kind} on uncoupled pair {ins.qubits}")
    return active_qubits(res.circuit)


@dataclass(frozen=True)
class GroupStats:
    counts: tuple[int, ...]
    total: int

    def frequency(self, qubit: int) -> float:
        return self.counts[qubit] / self.total if self.total else 0.0

    def frequencies(self) -> list[float]:
        return [self.frequency(q) for q in range(len(self.counts))]


@dataclass(frozen=True)
class UtilizationTable:
    groups: dict = field(default_factory=dict)  # GroupKey -> GroupStats

    def keys(self) -> list[GroupKey]:
        return sorted(self.groups)

    def __getitem__(self, key: GroupKey) -> GroupStats:
        return self.groups[key]

    def __len__(self) -> int:
        return len(self.groups)

    def select(self, **filters) -> list[GroupKey]:
        """Group keys matching every given field (e.g. ``q=6, L="sabre"``)."""
        return [k for k in self.keys() if all(getattr(k, f) == v for f, v in filters.items())]


def aggregate(
    results: Iterable[tuple[ParameterSet, frozenset[int] | None]],
    sizes: dict[str, int] | None = None,
) -> UtilizationTable:
    """Fold run results into per-group, per-qubit activity counts.

    ``None`` results are failed runs and are left out of the denominators.
    The fold is order independent.  Results from different sweeps, or the
    same ordinal twice, raise :class:`ConsistencyError`.
    """
    counts: dict[GroupKey, list[int]] = {}
    totals: dict[GroupKey, int] = {}
    tags = set()
    seen = set()
    for p, active in results:
        tags.add(p.sweep)
        if len(tags) > 1:
            raise ConsistencyError("results come from more than one sweep")
        if p.ordinal in seen:
            raise ConsistencyError(f"ordinal {p.ordinal} appears twice")
        seen.add(p.ordinal)
        key = p.group
        if key not in counts:
            n = sizes[p.arch_ref] if sizes and p.arch_ref in sizes else _arch(p.arch_ref).n
            counts[key] = [0] * n
            totals[key] = 0
        if active is None:
            continue
        totals[key] += 1
        row = counts[key]
        for qb in active:
            row[qb] += 1
    return UtilizationTable({k: GroupStats(tuple(counts[k]), totals[k]) for k in sorted(counts)})


# ---------------------------------------------------------------------------
# parallel execution

_PARAMS: Sequence[ParameterSet] = ()


def _init_worker(params: Sequence[ParameterSet]) -> None:
    global _PARAMS
    _PARAMS = params


def _eval_ordinal(i: int) -> tuple[int, tuple[int, ...] | None, str | None]:
    p = _PARAMS[i]
    err = None
    for _attempt in range(2):
        try:
            return i, tuple(sorted(evaluate(p))), None
        except Exception as exc:  # noqa: BLE001 - recorded, never swallowed silently
            err = f"{type(exc).__name__}: {exc}"
    return i, None, err


def _eval_chunk(bounds: tuple[int, int]) -> list[tuple[int, tuple[int, ...] | None, str | None]]:
    return [_eval_ordinal(i) for i in range(*bounds)]


@dataclass(frozen=True)
class Failure:
    ordinal: int
    params: ParameterSet
    error: str


@dataclass
class SweepOutcome:
    table: UtilizationTable
    manifest: dict
    failures: list[Failure]
    params: list[ParameterSet]


def _chunks(n: int, size: int) -> list[tuple[int, int]]:
    return [(a, min(a + size, n)) for a in range(0, n, size)]


def _mp_context():
    methods = mp.get_all_start_methods()
    return mp.get_context("fork" if "fork" in methods else "spawn")


def _run_parallel(params, chunks, workers, sink) -> list[tuple[int, int]]:
    """Evaluate ``chunks`` on a process pool; returns chunks left unfinished."""
    pending = set(chunks)
    try:
        with ProcessPoolExecutor(
            max_workers=workers, mp_context=_mp_context(), initializer=_init_worker, initargs=(params,)
        ) as pool:
            futures = {pool.submit(_eval_chunk, c): c for c in chunks}
            for fut, c in futures.items():
                sink(fut.result())
                pending.discard(c)
    except BrokenProcessPool:
        log.warning("worker pool broke with %d chunk(s) unfinished", len(pending))
    return sorted(pending)


def run_sweep(cfg: SweepConfig, workers: int = 1, chunk_size: int = 32) -> SweepOutcome:
    """Expand, evaluate every parameter set, and aggregate.

    The output does not depend on ``workers``: results are keyed by ordinal
    and folded in ordinal order.
    """
    if workers < 1:
        raise ConfigurationError("workers must be >= 1")
    params = expand_parameters(cfg)
    started = time.monotonic()
    results: dict[int, tuple[tuple[int, ...] | None, str | None]] = {}
    step = max(1, len(params) // 10)
    next_log = [step]

    def sink(batch):
        for i, active, err in batch:
            results[i] = (active, err)
        if len(results) >= next_log[0]:
            log.info("evaluated %d/%d", len(results), len(params))
            next_log[0] += step

    chunks = _chunks(len(params), chunk_size)
    if workers == 1:
        _init_worker(params)
        for c in chunks:
            sink(_eval_chunk(c))
    else:
        left = _run_parallel(params, chunks, workers, sink)
        if left:
            # a crashed worker takes its chunk with it; retry those once
            left = _run_parallel(params, left, workers, sink)
        for a, b in left:
            for i in range(a, b):
                results.setdefault(i, (None, "worker process crashed"))

    failures = [Failure(i, params[i], results[i][1]) for i in sorted(results) if results[i][0] is None]
    table = aggregate((params[i], None if results[i][0] is None else frozenset(results[i][0])) for i in sorted(results))
    manifest = build_manifest(cfg, table, failures, workers, time.monotonic() - started)
    return SweepOutcome(table, manifest, failures, params)


def build_manifest(cfg: SweepConfig, table: UtilizationTable, failures: list[Failure], workers: int, elapsed: float) -> dict:
    from . import __version__

    return {
        "artifact_version": __version__,
        "config": cfg.to_json(),
        "fingerprint": cfg.fingerprint(),
        "evaluations": sum(s.total for s in table.groups.values()) + len(failures),
        "groups": [
            {
                "arch": k.arch,
                "q": k.q,
                "d": k.d,
                "r": format_ratio(k.r),
                "O": k.O,
                "L": k.L,
                "total": table[k].total,
            }
            for k in table.keys()
        ],
        "failures": [f.ordinal for f in failures],
        "workers": workers,
        "elapsed_seconds": round(elapsed, 3),
    }


def reference_grid(samples: int = 400, global_seed: int = 0, arch: str = "falcon-r4") -> SweepConfig:
    """The 108-group reference grid with ``samples`` generation seeds per group."""
    return SweepConfig(
        (arch,), REFERENCE_QUBITS, REFERENCE_DEPTHS, REFERENCE_RATIOS, REFERENCE_LEVELS, REFERENCE_LAYOUTS,
        mg=samples, mt=1, global_seed=global_seed,
    )
