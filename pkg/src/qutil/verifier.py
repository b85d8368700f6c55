"""Brute-force semantic checks for transpiled circuits.

Ordering convention: qubit ``k`` is bit ``k`` of a basis-state index
(little-endian), so for ``width 2`` the state ``|q1 q0>`` has index
``2*q1 + q0``.  Two-qubit gate matrices use the same rule on their operand
list: operand 0 is the low bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .architecture import ArchitectureSpec, falcon_r4, line, subgraph
from .circuit import Circuit, Instruction, active_qubits
from .errors import CapacityError, ConsistencyError
from .gates import matrix
from .rng import XorShift64Star, derive_seed

MAX_UNITARY_WIDTH = 8
MAX_PROBE_WIDTH = 22
DEFAULT_TOL = 1e-9


def _apply(state: np.ndarray, n: int, ins: Instruction) -> np.ndarray:
    """Apply one instruction to a batch of states shaped ``(2**n, k)``."""
    k = state.shape[1]
    t = state.reshape((2,) * n + (k,))
    g = matrix(ins.kind, ins.params)
    if len(ins.qubits) == 1:
        ax = n - 1 - ins.qubits[0]
        t = np.tensordot(g, t, axes=([1], [ax]))
        t = np.moveaxis(t, 0, ax)
    else:
        a, b = ins.qubits
        ax_a, ax_b = n - 1 - a, n - 1 - b
        # local index bit(a) + 2*bit(b): reshaped rows are (out_b, out_a)
        g4 = g.reshape(2, 2, 2, 2)
        t = np.tensordot(g4, t, axes=([2, 3], [ax_b, ax_a]))
        t = np.moveaxis(t, [0, 1], [ax_b, ax_a])
    return t.reshape(2**n, k)


def unitary(c: Circuit) -> np.ndarray:
    """Full ``2**width`` unitary of ``c`` (instructions applied in order)."""
    if c.width > MAX_UNITARY_WIDTH:
        raise CapacityError(f"unitary oracle is capped at {MAX_UNITARY_WIDTH} qubits, got {c.width}")
    u = np.eye(2**c.width, dtype=complex)
    for ins in c.instructions:
        u = _apply(u, c.width, ins)
    return u


def apply_circuit(c: Circuit, states: np.ndarray) -> np.ndarray:
    """Evolve column states (shape ``(2**width, k)`` or a single vector)."""
    if c.width > MAX_PROBE_WIDTH:
        raise CapacityError(f"statevector probes are capped at {MAX_PROBE_WIDTH} qubits")
    vec = states.ndim == 1
    s = np.asarray(states, dtype=complex).reshape(2**c.width, -1)
    for ins in c.instructions:
        s = _apply(s, c.width, ins)
    return s[:, 0] if vec else s


def phase_aligned_deviation(a: np.ndarray, b: np.ndarray) -> float:
    """max |a - e^{i phi} b| with phi chosen from the overlap of a and b."""
    overlap = np.vdot(b, a)
    phase = overlap / abs(overlap) if abs(overlap) > 1e-300 else 1.0
    return float(np.max(np.abs(a - phase * b)))


def permutation_matrix(mapping: Sequence[int]) -> np.ndarray:
    """Unitary sending the content of qubit ``i`` to qubit ``mapping[i]``."""
    n = len(mapping)
    dim = 2**n
    idx = np.arange(dim)
    dest = np.zeros(dim, dtype=np.int64)
    for i, m in enumerate(mapping):
        dest |= ((idx >> i) & 1) << m
    p = np.zeros((dim, dim), dtype=complex)
    p[dest, idx] = 1.0
    return p


@dataclass(frozen=True)
class _Reduction:
    """The transpiled problem restricted to the physical qubits that matter."""

    width: int
    result: Circuit  # result circuit on compact indices
    expected: Circuit  # original circuit placed at compact initial positions
    moves: tuple[int, ...]  # compact initial position -> compact final position


def _reduce(original: Circuit, result) -> _Reduction:
    init = result.initial_layout.v2p
    final = result.final_layout.v2p
    out = result.circuit
    if len(init) != len(final):
        raise ConsistencyError("initial and final layouts cover different virtual sets")
    relevant = set(active_qubits(out))
    relevant.update(init[v] for v in range(original.width))
    relevant.update(final[v] for v in range(original.width))
    keep = sorted(relevant)
    compact = {p: i for i, p in enumerate(keep)}
    moves = list(range(len(keep)))
    for v, (p0, p1) in enumerate(zip(init, final)):
        if p0 in compact or p1 in compact:
            if p0 not in compact or p1 not in compact:
                raise ConsistencyError(f"virtual qubit {v} moved through an idle physical qubit")
            moves[compact[p0]] = compact[p1]
    width = max(len(keep), 1)
    res = Circuit(
        width,
        [Instruction(i.kind, i.params, tuple(compact[q] for q in i.qubits)) for i in out.instructions],
        validate=False,
    )
    exp = Circuit(
        width,
        [Instruction(i.kind, i.params, tuple(compact[init[q]] for q in i.qubits)) for i in original.instructions],
        validate=False,
    )
    if len(keep) == 0:
        moves = [0]
    return _Reduction(width, res, exp, tuple(moves))


def equivalent(original: Circuit, result, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Check ``P_final^T U_result P_initial == U_original (x) I`` up to phase.

    Only physical qubits that carry instructions or hold an original qubit at
    the start or end take part; all others are untouched by construction.
    Returns ``(ok, max deviation)``.
    """
    if original.width > MAX_UNITARY_WIDTH:
        raise CapacityError(f"original circuit wider than {MAX_UNITARY_WIDTH}")
    red = _reduce(original, result)
    if red.width > MAX_UNITARY_WIDTH:
        raise CapacityError(
            f"{red.width} relevant physical qubits exceed the unitary cap; use probe_equivalent"
        )
    u_res = unitary(red.result)
    u_exp = permutation_matrix(red.moves) @ unitary(red.expected)
    dev = phase_aligned_deviation(u_res, u_exp)
    return dev <= tol, dev


def probe_equivalent(
    original: Circuit, result, samples: int = 20, seed: int = 0, tol: float = DEFAULT_TOL
) -> tuple[bool, float]:
    """Statevector version of :func:`equivalent` on random basis states.

    One global phase is fitted across all probes, so relative phases between
    columns are still checked.
    """
    red = _reduce(original, result)
    if red.width > MAX_PROBE_WIDTH:
        raise CapacityError(f"{red.width} relevant qubits exceed the probe cap of {MAX_PROBE_WIDTH}")
    rng = XorShift64Star(derive_seed(seed, 0x9E0B))
    dim = 2**red.width
    cols = sorted({rng.randbelow(dim) for _ in range(samples)})
    states = np.zeros((dim, len(cols)), dtype=complex)
    states[cols, range(len(cols))] = 1.0
    got = apply_circuit(red.result, states)
    want = apply_circuit(red.expected, states)
    # relocate qubit contents according to the layout permutation
    idx = np.arange(dim)
    dest = np.zeros(dim, dtype=np.int64)
    for i, m in enumerate(red.moves):
        dest |= ((idx >> i) & 1) << m
    moved = np.zeros_like(want)
    moved[dest] = want
    dev = phase_aligned_deviation(got, moved)
    return dev <= tol, dev


def check(original: Circuit, result, tol: float = DEFAULT_TOL, seed: int = 0) -> tuple[bool, float]:
    """Exact check when the reduced problem fits, statevector probes otherwise."""
    try:
        return equivalent(original, result, tol)
    except CapacityError:
        return probe_equivalent(original, result, seed=seed, tol=tol)


# Falcon patch used for small-width checks: a connected 8-qubit region.
FALCON_PATCH = (0, 1, 2, 3, 4, 5, 7, 8)


def suite_architectures(width: int) -> list[ArchitectureSpec]:
    return [line(width), subgraph(falcon_r4(), FALCON_PATCH, name="falcon-patch")]


@dataclass(frozen=True)
class SuiteCase:
    arch: str
    q: int
    d: int
    r: tuple[int, int]
    O: int
    L: str
    ok: bool
    deviation: float


def run_suite(
    circuits: int = 500,
    max_width: int = 5,
    seed: int = 0,
    tol: float = DEFAULT_TOL,
    levels: Sequence[int] = (0, 1, 2, 3),
    layouts: Sequence[str] = ("trivial", "dense", "sabre"),
) -> list[SuiteCase]:
    """Generate random circuits and check every (O, L) transpilation of each."""
    from .generator import GenerationConfig, generate
    from .transpiler import TranspileConfig, transpile

    rng = XorShift64Star(derive_seed(seed, 0x5017E))
    ratios = [(4, 1), (1, 1), (1, 4), (1, 0)]
    cases = []
    for i in range(circuits):
        q = 1 + rng.randbelow(max_width)
        d = rng.randbelow(13)
        r = ratios[rng.randbelow(len(ratios))] if q > 1 else (1, 0)
        circ = generate(GenerationConfig(q, d, r, rng.next_u64()))
        archs = suite_architectures(max_width)
        arch = archs[i % len(archs)]
        tseed = rng.next_u64()
        for O in levels:
            for L in layouts:
                res = transpile(circ, arch, TranspileConfig(O=O, L=L, seed=tseed))
                ok, dev = check(circ, res, tol)
                cases.append(SuiteCase(arch.name, q, d, r, O, L, ok, dev))
    return cases
