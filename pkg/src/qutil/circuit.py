"""Circuit data model, depth accounting and active-qubit extraction.

Text format (one item per line, ``#`` starts a comment)::

    width 3
    slack 0 2 1
    H 0
    Rz(1.5707963267948966) 2
    CX 0,1

``width`` is mandatory and must come first; ``slack`` is optional (defaults to
zeros).  Parameters are written with ``repr`` so the round trip is exact.
"""

from __future__ import annotations

import re
from typing import Iterable, NamedTuple, Sequence

from .errors import QutilError, UnsupportedGateError
from .gates import KINDS, ParameterArityError


class Instruction(NamedTuple):
    kind: str
    params: tuple[float, ...]
    qubits: tuple[int, ...]

    @property
    def arity(self) -> int:
        return len(self.qubits)

    def __str__(self) -> str:
        head = self.kind
        if self.params:
            head += "(" + ",".join(repr(float(p)) for p in self.params) + ")"
        return head + " " + ",".join(str(q) for q in self.qubits)


def instr(kind: str, *qubits: int, params: Sequence[float] = ()) -> Instruction:
    """Convenience constructor: ``instr("CX", 0, 1)``."""
    return Instruction(kind, tuple(float(p) for p in params), tuple(qubits))


def validate_instruction(ins: Instruction, width: int) -> None:
    k = KINDS.get(ins.kind)
    if k is None:
        raise UnsupportedGateError(f"unknown gate kind {ins.kind!r}")
    if len(ins.params) != k.param_count:
        raise ParameterArityError(f"{ins.kind} takes {k.param_count} parameter(s)")
    if len(ins.qubits) != k.arity:
        raise UnsupportedGateError(
            f"{ins.kind} acts on {k.arity} qubit(s), got operands {ins.qubits}"
        )
    if len(set(ins.qubits)) != len(ins.qubits):
        raise IndexError(f"duplicate operand in {ins}")
    for q in ins.qubits:
        if not 0 <= q < width:
            raise IndexError(f"operand {q} out of range for width {width}")


class Circuit:
    """Immutable ordered list of instructions over ``width`` qubits."""

    __slots__ = ("width", "instructions", "slack", "_depth")

    def __init__(
        self,
        width: int,
        instructions: Iterable[Instruction] = (),
        slack: Sequence[int] | None = None,
        *,
        validate: bool = True,
    ):
        if width < 1:
            raise ValueError("circuit width must be positive")
        self.width = int(width)
        self.instructions = tuple(instructions)
        if validate:
            for ins in self.instructions:
                validate_instruction(ins, self.width)
        self.slack = tuple(slack) if slack is not None else (0,) * self.width
        if len(self.slack) != self.width or any(s < 0 for s in self.slack):
            raise ValueError("slack must hold one non-negative count per qubit")
        self._depth = None

    # value semantics
    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Circuit)
            and self.width == other.width
            and self.instructions == other.instructions
            and self.slack == other.slack
        )

    def __hash__(self) -> int:
        return hash((self.width, self.instructions, self.slack))

    def __len__(self) -> int:
        return len(self.instructions)

    def __iter__(self):
        return iter(self.instructions)

    def __repr__(self) -> str:
        return f"Circuit(width={self.width}, instructions={len(self.instructions)})"

    def depth(self) -> int:
        if self._depth is None:
            self._depth = depth(self)
        return self._depth

    def count_2q(self) -> int:
        return sum(1 for ins in self.instructions if len(ins.qubits) == 2)

    def count_ops(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for ins in self.instructions:
            counts[ins.kind] = counts.get(ins.kind, 0) + 1
        return counts

    def with_instructions(self, instructions: Iterable[Instruction], *, validate=False) -> "Circuit":
        return Circuit(self.width, instructions, self.slack, validate=validate)

    def widened(self, width: int) -> "Circuit":
        """Same instructions on a wider register (extra qubits idle)."""
        if width < self.width:
            raise ValueError("cannot narrow a circuit")
        return Circuit(width, self.instructions, self.slack + (0,) * (width - self.width), validate=False)

    def to_text(self) -> str:
        lines = [f"width {self.width}"]
        if any(self.slack):
            lines.append("slack " + " ".join(str(s) for s in self.slack))
        lines.extend(str(ins) for ins in self.instructions)
        return "\n".join(lines) + "\n"


def empty(width: int) -> Circuit:
    return Circuit(width)


def depth(c: Circuit) -> int:
    """Longest chain of instructions sharing qubits (slack is not counted)."""
    level = [0] * c.width
    for ins in c.instructions:
        qs = ins.qubits
        if len(qs) == 1:
            level[qs[0]] += 1
        else:
            a, b = qs
            d = (level[a] if level[a] > level[b] else level[b]) + 1
            level[a] = level[b] = d
    return max(level, default=0)


def compose(c: Circuit, ins: Instruction) -> Circuit:
    validate_instruction(ins, c.width)
    return Circuit(c.width, c.instructions + (ins,), c.slack, validate=False)


def active_qubits(c: Circuit) -> frozenset[int]:
    """Indices that appear as an operand of at least one instruction."""
    seen: set[int] = set()
    for ins in c.instructions:
        seen.update(ins.qubits)
    return frozenset(seen)


_LINE = re.compile(r"^(?P<kind>[A-Za-z]+)(?:\((?P<params>[^)]*)\))?\s+(?P<qubits>\d+(?:\s*,\s*\d+)*)$")


class CircuitParseError(QutilError, ValueError):
    pass


def from_text(text: str) -> Circuit:
    width = None
    slack = None
    instructions = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("width "):
            width = int(line.split()[1])
            continue
        if line.startswith("slack "):
            slack = [int(tok) for tok in line.split()[1:]]
            continue
        if width is None:
            raise CircuitParseError(f"line {lineno}: 'width' must precede instructions")
        m = _LINE.match(line)
        if m is None:
            raise CircuitParseError(f"line {lineno}: cannot parse {raw!r}")
        ps = m.group("params")
        params = tuple(float(p) for p in ps.split(",")) if ps else ()
        qubits = tuple(int(q) for q in m.group("qubits").split(","))
        instructions.append(Instruction(m.group("kind"), params, qubits))
    if width is None:
        raise CircuitParseError("missing 'width' line")
    return Circuit(width, instructions, slack)
