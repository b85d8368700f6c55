"""Leveled optimization passes.

* O0: nothing.
* O1: adjacent inverse-pair cancellation, then fusion of maximal one-qubit
  runs into a single Euler sequence (kept only when shorter).
* O2: the O1 passes plus commutation-aware CX-pair cancellation, iterated
  until the instruction list stops changing (budget 10 rounds).
* O3: as O2 with a budget of 100 rounds.

No pass inserts gates on a qubit that had none, so the used-qubit set can only
shrink.
"""

from __future__ import annotations

from ..circuit import Circuit, Instruction
from ..gates import KINDS, BasisSet, flat_1q, inverse_of, mul_flat, synthesize_1q, wrap_angle

ROUND_BUDGET = {2: 10, 3: 100}


def _inverse_name(name: str) -> str:
    k = KINDS[name]
    return inverse_of(name, (0.0,) * k.param_count)[0]


_INVERSE_NAME = {name: _inverse_name(name) for name in KINDS}


def _is_inverse(h: Instruction, g: Instruction) -> bool:
    if _INVERSE_NAME[h.kind] != g.kind:
        return False
    kind, params, slots = inverse_of(h.kind, h.params)
    if kind != g.kind or len(params) != len(g.params):
        return False
    if tuple(h.qubits[s] for s in slots) != g.qubits:
        return False
    return all(abs(wrap_angle(a - b)) < 1e-12 for a, b in zip(params, g.params))


def cancel_inverse_pairs(c: Circuit) -> Circuit:
    """Remove gates immediately followed (on all their wires) by their inverse."""
    kept: list[Instruction | None] = []
    stacks: list[list[int]] = [[] for _ in range(c.width)]
    inverse_name = _INVERSE_NAME
    for ins in c.instructions:
        qs = ins.qubits
        st = stacks[qs[0]]
        if st:
            top = st[-1]
            prev = kept[top]
            pq = prev.qubits
            if len(qs) == 1 and ins.kind == "Rz":
                if prev.kind == "Rz" and abs(wrap_angle(prev.params[0] + ins.params[0])) < 1e-12:
                    kept[top] = None
                    st.pop()
                    continue
            elif (
                inverse_name[prev.kind] == ins.kind
                and len(pq) == len(qs)
                and (len(qs) == 1 or ((pq == qs or pq == (qs[1], qs[0])) and stacks[qs[1]][-1] == top))
                and _is_inverse(prev, ins)
            ):
                kept[top] = None
                for q in qs:
                    stacks[q].pop()
                continue
        idx = len(kept)
        kept.append(ins)
        for q in qs:
            stacks[q].append(idx)
    return c.with_instructions(ins for ins in kept if ins is not None)


def _run_matrix(run: list[Instruction]):
    u = (1 + 0j, 0j, 0j, 1 + 0j)
    for ins in run:
        u = mul_flat(flat_1q(ins.kind, ins.params), u)
    return u


def fuse_1q_runs(c: Circuit, basis: BasisSet, memo: dict | None = None) -> Circuit:
    """Collapse each maximal one-qubit run into its Euler form when shorter.

    ``memo`` caches run -> replacement across calls (the O2 fixpoint loop
    sees mostly unchanged runs from one round to the next).
    """
    out: list[Instruction] = []
    runs: list[list[Instruction]] = [[] for _ in range(c.width)]
    if memo is None:
        memo = {}

    def flush(q: int) -> None:
        run = runs[q]
        if not run:
            return
        if len(run) == 1 and run[0].kind != "I":
            out.append(run[0])
        else:
            key = tuple(run)
            new = memo.get(key)
            if new is None:
                syn = synthesize_1q(_run_matrix(run), basis)
                new = tuple(Instruction(k, p, (q,)) for k, p in syn) if len(syn) < len(run) else key
                memo[key] = new
            out.extend(new)
        runs[q] = []

    for ins in c.instructions:
        if len(ins.qubits) == 1:
            runs[ins.qubits[0]].append(ins)
            continue
        for q in ins.qubits:
            flush(q)
        out.append(ins)
    for q in range(c.width):
        flush(q)
    return c.with_instructions(out)


_DIAGONAL_1Q = {"Rz", "I", "Z", "S", "Sdg", "T", "Tdg", "P"}
_X_AXIS_1Q = {"X", "SX", "SXdg", "I", "Rx"}


def _passes_control(ins: Instruction, a: int, b: int) -> bool:
    """Does ``ins`` (touching control wire ``a``) commute with CX(a, b)?"""
    if len(ins.qubits) == 1:
        return ins.kind in _DIAGONAL_1Q
    return ins.kind == "CX" and ins.qubits[0] == a and ins.qubits[1] != b


def _passes_target(ins: Instruction, a: int, b: int) -> bool:
    if len(ins.qubits) == 1:
        return ins.kind in _X_AXIS_1Q
    return ins.kind == "CX" and ins.qubits[1] == b and ins.qubits[0] != a


def cancel_cx_pairs(c: Circuit) -> Circuit:
    """Cancel CX(a,b) pairs separated only by gates commuting with CX(a,b)."""
    ins_list = c.instructions
    alive = [True] * len(ins_list)
    wires: list[list[int]] = [[] for _ in range(c.width)]
    where: list[tuple[int, int] | None] = [None] * len(ins_list)
    for i, ins in enumerate(ins_list):
        qs = ins.qubits
        if len(qs) == 1:
            wires[qs[0]].append(i)
        else:
            wa, wb = wires[qs[0]], wires[qs[1]]
            where[i] = (len(wa), len(wb))
            wa.append(i)
            wb.append(i)
    diagonal, x_axis = _DIAGONAL_1Q, _X_AXIS_1Q
    changed = False

    for i, ins in enumerate(ins_list):
        if ins.kind != "CX" or not alive[i]:
            continue
        a, b = ins.qubits
        pa, pb = where[i]
        # first live gate on the control wire that does not commute
        ja = -1
        w = wires[a]
        for k in range(pa + 1, len(w)):
            j = w[k]
            if not alive[j]:
                continue
            x = ins_list[j]
            xq = x.qubits
            if len(xq) == 1:
                if x.kind in diagonal:
                    continue
            elif x.kind == "CX" and xq[0] == a and xq[1] != b:
                continue
            ja = j
            break
        if ja < 0 or ins_list[ja].kind != "CX" or ins_list[ja].qubits != (a, b):
            continue
        jb = -1
        w = wires[b]
        for k in range(pb + 1, len(w)):
            j = w[k]
            if not alive[j]:
                continue
            x = ins_list[j]
            xq = x.qubits
            if len(xq) == 1:
                if x.kind in x_axis:
                    continue
            elif x.kind == "CX" and xq[1] == b and xq[0] != a:
                continue
            jb = j
            break
        if jb == ja:
            alive[i] = alive[ja] = False
            changed = True
    if not changed:
        return c
    return c.with_instructions(x for x, keep in zip(ins_list, alive) if keep)


def optimize(c: Circuit, level: int, basis: BasisSet) -> Circuit:
    if level <= 0:
        return c
    if level == 1:
        return fuse_1q_runs(cancel_inverse_pairs(c), basis)
    budget = ROUND_BUDGET.get(level, ROUND_BUDGET[3])
    cur = c
    memo: dict = {}
    for _ in range(budget):
        nxt = cancel_inverse_pairs(cur)
        nxt = cancel_cx_pairs(nxt)
        nxt = fuse_1q_runs(nxt, basis, memo)
        if nxt.instructions == cur.instructions:
            break
        cur = nxt
    return cur
