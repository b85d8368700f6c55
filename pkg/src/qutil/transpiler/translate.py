"""Basis translation (unrolling) and the initialization check."""

from __future__ import annotations

from ..circuit import Circuit, Instruction
from ..errors import UnsupportedGateError
from ..gates import BasisSet, translate_template


def initialize(c: Circuit) -> Circuit:
    """Reject gates on three or more qubits; anything narrower passes through."""
    for ins in c.instructions:
        if len(ins.qubits) > 2:
            raise UnsupportedGateError(
                f"{ins.kind} acts on {len(ins.qubits)} qubits; no decomposition is registered"
            )
    return c


def translate(c: Circuit, basis: BasisSet) -> Circuit:
    """Rewrite every instruction into ``basis`` kinds on the same operands."""
    out: list[Instruction] = []
    append = out.append
    for ins in c.instructions:
        if ins.kind in basis:
            append(ins)
            continue
        qs = ins.qubits
        for kind, params, slots in translate_template(ins.kind, ins.params, basis):
            append(Instruction(kind, params, tuple(qs[s] for s in slots)))
    return Circuit(c.width, out, c.slack, validate=False)
