"""SABRE swap routing and bidirectional layout search."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from ..architecture import ArchitectureSpec, CouplingMap
from ..circuit import Circuit, Instruction
from ..errors import CapacityError
from ..rng import XorShift64Star, derive_seed
from ._sabre_kernel import route_kernel
from .layout import Layout


@dataclass(frozen=True)
class SabreOptions:
    extended_set_size: int = 20
    extended_set_weight: float = 0.5
    decay_delta: float = 0.001
    decay_reset: int = 5
    layout_trials: int = 4
    layout_iterations: int = 3


DEFAULT_SABRE = SabreOptions()


@lru_cache(maxsize=64)
def _graph_arrays(cm: CouplingMap):
    ptr = np.zeros(cm.n + 1, np.int64)
    idx = []
    for q in range(cm.n):
        idx.extend(cm.neighbors[q])
        ptr[q + 1] = len(idx)
    return ptr, np.asarray(idx, np.int64), np.ascontiguousarray(cm.distance_matrix, dtype=np.int64)


def _gate_arrays(instructions: Sequence[Instruction]):
    g0 = np.empty(len(instructions), np.int64)
    g1 = np.empty(len(instructions), np.int64)
    for i, ins in enumerate(instructions):
        qs = ins.qubits
        g0[i] = qs[0]
        g1[i] = qs[1] if len(qs) == 2 else -1
    return g0, g1


def _run(g0, g1, v2p, arch: ArchitectureSpec, opts: SabreOptions, seed: int):
    """Route gate arrays; returns (out rows, swap count, final v2p)."""
    ptr, idx, dist = _graph_arrays(arch.coupling)
    n = arch.n
    n2 = int((g1 >= 0).sum())
    valve = n
    diameter = int(dist.max())
    cap = len(g0) + n2 * (valve + diameter + 1) + 1
    out = np.empty((cap, 4), np.int64)
    state = np.array([XorShift64Star(seed).state], dtype=np.uint64)
    v2p = np.array(v2p, dtype=np.int64)
    n_out, n_swaps = route_kernel(
        g0, g1, v2p, dist, ptr, idx,
        opts.extended_set_size, opts.extended_set_weight,
        opts.decay_delta, opts.decay_reset, valve, state, out,
    )
    return out[:n_out], int(n_swaps), v2p


def sabre_route(
    c: Circuit,
    layout: Layout,
    arch: ArchitectureSpec,
    seed: int = 0,
    options: SabreOptions = DEFAULT_SABRE,
) -> tuple[Circuit, Layout]:
    """Insert SWAPs so that every two-qubit gate acts on a coupled pair.

    ``layout`` is filled with ancillas to all physical qubits first.  The
    returned circuit has width ``arch.n`` and the returned layout maps every
    virtual (including ancilla) index to its physical position at the end.
    """
    if c.width > arch.n:
        raise CapacityError(f"circuit has {c.width} qubits, architecture only {arch.n}")
    full = layout.fill(arch.n)
    cm = arch.coupling
    m = full.v2p
    if all(len(ins.qubits) == 1 or cm.coupled(m[ins.qubits[0]], m[ins.qubits[1]]) for ins in c.instructions):
        mapped = [Instruction(ins.kind, ins.params, tuple(m[q] for q in ins.qubits)) for ins in c.instructions]
        return Circuit(arch.n, mapped, validate=False), full
    g0, g1 = _gate_arrays(c.instructions)
    rows, _, final = _run(g0, g1, full.v2p, arch, options, seed)
    return _emit(c, rows, arch.n), Layout(final.tolist())


def _emit(c: Circuit, rows: np.ndarray, n: int) -> Circuit:
    src = c.instructions
    out = []
    for kind, g, a, b in rows.tolist():
        if kind == 1:
            out.append(Instruction("SWAP", (), (a, b)))
        else:
            ins = src[g]
            qs = (a,) if b < 0 else (a, b)
            out.append(Instruction(ins.kind, ins.params, qs))
    return Circuit(n, out, validate=False)


def count_swaps(c: Circuit) -> int:
    return sum(1 for ins in c.instructions if ins.kind == "SWAP")


def sabre_layout(
    c: Circuit,
    arch: ArchitectureSpec,
    seed: int = 0,
    trials: int | None = None,
    options: SabreOptions = DEFAULT_SABRE,
    starting_layouts: Sequence[Layout] = (),
) -> tuple[Layout, Circuit, Layout]:
    """Bidirectional SABRE layout search.

    Each trial starts from a layout (the ``starting_layouts`` first, then
    uniformly random permutations), refines it by alternating forward and
    reverse routing passes over the two-qubit gates, and finally routes the
    full circuit.  The trial with the fewest SWAPs wins, ties to the lowest
    trial index.  Returns ``(initial layout, routed circuit, final layout)``;
    layouts are full bijections over ``arch.n``.
    """
    if c.width > arch.n:
        raise CapacityError(f"circuit has {c.width} qubits, architecture only {arch.n}")
    n = arch.n
    trials = options.layout_trials if trials is None else trials
    twoq = [ins for ins in c.instructions if len(ins.qubits) == 2]
    f0, f1 = _gate_arrays(twoq)
    r0, r1 = f0[::-1].copy(), f1[::-1].copy()
    a0, a1 = _gate_arrays(c.instructions)

    starts = [s.fill(n).v2p for s in starting_layouts]
    rng = XorShift64Star(derive_seed(seed, 0x5AB7E))
    for _ in range(trials):
        starts.append(tuple(rng.permutation(n)))

    best = None
    for t, v2p in enumerate(starts):
        cur = v2p
        if twoq:
            for it in range(options.layout_iterations):
                _, _, fwd = _run(f0, f1, cur, arch, options, derive_seed(seed, t, it, 0))
                _, _, back = _run(r0, r1, fwd, arch, options, derive_seed(seed, t, it, 1))
                cur = tuple(back.tolist())
        rows, swaps, final = _run(a0, a1, cur, arch, options, derive_seed(seed, t, 0xF1))
        if best is None or swaps < best[0]:
            best = (swaps, cur, rows, final)
    swaps, init, rows, final = best
    return Layout(init), _emit(c, rows, n), Layout(final.tolist())
