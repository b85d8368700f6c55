"""End-to-end transpilation: initialize, layout, route, translate, optimize."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..architecture import ArchitectureSpec
from ..circuit import Circuit, depth
from ..errors import CapacityError, ConfigurationError
from ..rng import derive_seed
from .layout import Layout, dense_layout, trivial_layout, vf2_layout
from .optimize import optimize
from .sabre import DEFAULT_SABRE, SabreOptions, sabre_layout, sabre_route
from .translate import initialize, translate

LAYOUT_METHODS = ("trivial", "dense", "sabre")


@dataclass(frozen=True)
class TranspileConfig:
    O: int = 1
    L: str = "sabre"
    seed: int = 0
    routing: str = "sabre"
    trivial_first: bool = True
    vf2: bool = True
    vf2_limit: int = 10_000
    seed_trivial_trial: bool = True
    sabre: SabreOptions = field(default=DEFAULT_SABRE)

    def validate(self) -> None:
        if self.O not in (0, 1, 2, 3):
            raise ConfigurationError(f"optimization level must be 0-3, got {self.O}")
        if self.L not in LAYOUT_METHODS:
            raise ConfigurationError(f"layout method must be one of {LAYOUT_METHODS}, got {self.L!r}")
        if self.routing != "sabre":
            raise ConfigurationError("only sabre routing is available")


@dataclass(frozen=True)
class TranspileResult:
    circuit: Circuit
    initial_layout: Layout
    final_layout: Layout
    layout_method: str
    stage_metrics: dict = field(default_factory=dict)
    num_virtual: int = 0


def _metrics(c: Circuit) -> dict:
    return {"gates": len(c), "two_qubit": c.count_2q(), "depth": depth(c)}


def connectivity_ok(c: Circuit, arch: ArchitectureSpec) -> bool:
    cm = arch.coupling
    return all(len(ins.qubits) == 1 or cm.coupled(*ins.qubits) for ins in c.instructions)


def transpile(c: Circuit, arch: ArchitectureSpec, cfg: TranspileConfig = TranspileConfig()) -> TranspileResult:
    cfg.validate()
    if c.width > arch.n:
        raise CapacityError(f"circuit has {c.width} qubits, architecture only {arch.n}")
    metrics = {"input": _metrics(c)}
    c = initialize(c)
    route_seed = derive_seed(cfg.seed, 0x2077E)

    layout = None
    method = None
    starts: list[Layout] = []
    if cfg.O <= 1 and cfg.trivial_first:
        triv, perfect = trivial_layout(c, arch)
        if perfect:
            layout, method = triv, "trivial-perfect"
        elif cfg.seed_trivial_trial:
            starts.append(triv)
    if layout is None and cfg.vf2:
        found = vf2_layout(c, arch, cfg.vf2_limit)
        if found is not None:
            layout, method = found, "vf2"

    if layout is not None:
        routed, final = sabre_route(c, layout, arch, route_seed, cfg.sabre)
        initial = layout.fill(arch.n)
    elif cfg.L == "sabre":
        initial, routed, final = sabre_layout(c, arch, cfg.seed, options=cfg.sabre, starting_layouts=starts)
        method = "sabre"
    else:
        layout = trivial_layout(c, arch)[0] if cfg.L == "trivial" else dense_layout(c, arch)
        routed, final = sabre_route(c, layout, arch, route_seed, cfg.sabre)
        initial = layout.fill(arch.n)
        method = cfg.L
    metrics["routing"] = _metrics(routed)

    translated = translate(routed, arch.basis)
    metrics["translation"] = _metrics(translated)

    out = optimize(translated, cfg.O, arch.basis)
    if not connectivity_ok(out, arch):
        # only reachable with gate-inserting passes; repair and re-translate
        out, extra = sabre_route(out, Layout(range(arch.n)), arch, route_seed, cfg.sabre)
        final = Layout([extra[p] for p in final.v2p])
        out = optimize(translate(out, arch.basis), cfg.O, arch.basis)
    metrics["optimization"] = _metrics(out)

    return TranspileResult(
        circuit=out,
        initial_layout=initial,
        final_layout=final,
        layout_method=method,
        stage_metrics=metrics,
        num_virtual=c.width,
    )
