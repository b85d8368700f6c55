"""Seed-controlled synthetic circuit generation.

Each layer draws a fresh gate pool of ``q`` kinds whose one- to two-qubit split
matches the requested ratio (rounding remainders carry over to the next
layer), shuffles it, and places gates on randomly chosen free qubits until the
next gate no longer fits.  That gate is discarded and
every qubit left without a gate gets one unit of slack.

The first gate of every layer is anchored on a qubit that carries the current
deepest chain, which makes the emitted depth exactly ``d``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .circuit import Circuit, Instruction
from .errors import ConfigurationError
from .gates import KINDS, ONE_QUBIT_KINDS, TWO_QUBIT_KINDS
from .rng import XorShift64Star


@dataclass(frozen=True)
class GenerationConfig:
    q: int
    d: int
    r: tuple[int, int]
    seed: int = 0

    def validate(self) -> None:
        r1, r2 = self.r
        if self.q < 1:
            raise ConfigurationError("q must be >= 1")
        if self.d < 0:
            raise ConfigurationError("d must be >= 0")
        if r1 < 0 or r2 < 0 or (r1 == 0 and r2 == 0):
            raise ConfigurationError(f"invalid gate ratio {r1}:{r2}")
        if self.q < 2 and r2 > 0:
            raise ConfigurationError("two-qubit gates requested on a single-qubit circuit")


def parse_ratio(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(":")
        return int(a), int(b)
    except ValueError:
        raise ConfigurationError(f"ratio must look like 'a:b', got {text!r}") from None


def format_ratio(r: tuple[int, int]) -> str:
    return f"{r[0]}:{r[1]}"


def split_counts(r: tuple[int, int], pool_size: int) -> tuple[int, int]:
    r1, r2 = r
    n1 = int(pool_size * r1 / (r1 + r2) + 0.5)
    return n1, pool_size - n1


def layer_split(r: tuple[int, int], pool_size: int, layer: int) -> tuple[int, int]:
    """Split for ``layer`` with the rounding remainder carried between layers.

    The cumulative one-qubit count after ``k`` layers is the rounded exact
    share of ``k * pool_size``, so the long-run pool ratio equals ``r``.
    """
    r1, r2 = r
    frac = r1 / (r1 + r2)
    n1 = int((layer + 1) * pool_size * frac + 0.5) - int(layer * pool_size * frac + 0.5)
    return n1, pool_size - n1


def build_gate_pool(
    r: tuple[int, int], pool_size: int, rng: XorShift64Star, layer: int | None = None
) -> list[str]:
    """Gate kinds for one layer: one-qubit kinds first, then two-qubit kinds.

    Without ``layer`` the split is the plain rounded share of ``pool_size``.
    """
    n1, n2 = split_counts(r, pool_size) if layer is None else layer_split(r, pool_size, layer)
    pool = [rng.choice(ONE_QUBIT_KINDS) for _ in range(n1)]
    pool.extend(rng.choice(TWO_QUBIT_KINDS) for _ in range(n2))
    return pool


def generate_layers(cfg: GenerationConfig) -> tuple[list[list[Instruction]], list[int]]:
    """The generated instructions grouped by layer, plus per-qubit slack."""
    cfg.validate()
    q = cfg.q
    rng = XorShift64Star(cfg.seed)
    level = [0] * q
    slack = [0] * q
    layers: list[list[Instruction]] = []

    for layer in range(cfg.d):
        instructions: list[Instruction] = []
        layers.append(instructions)
        pool = build_gate_pool(cfg.r, q, rng, layer)
        rng.shuffle(pool)
        free = list(range(q))
        anchors = [i for i in range(q) if level[i] == layer]
        first = True
        for name in pool:
            k = KINDS[name]
            if k.arity > len(free):
                break
            if first:
                anchor = rng.choice(anchors)
                free.remove(anchor)
                operands = [anchor] + rng.sample(free, k.arity - 1)
                rng.shuffle(operands)
                first = False
            else:
                operands = rng.sample(free, k.arity)
            for o in operands:
                if o in free:
                    free.remove(o)
            params = tuple(rng.angle() for _ in range(k.param_count))
            ops = tuple(operands)
            instructions.append(Instruction(name, params, ops))
            lv = max(level[o] for o in ops) + 1
            for o in ops:
                level[o] = lv
            if not free:
                break
        for o in free:
            slack[o] += 1
    return layers, slack


def generate(cfg: GenerationConfig) -> Circuit:
    layers, slack = generate_layers(cfg)
    return Circuit(cfg.q, [ins for layer in layers for ins in layer], slack, validate=False)
