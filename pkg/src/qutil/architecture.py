"""Coupling maps, the 27-qubit Falcon R4 preset and generic topology generators."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigurationError
from .gates import FALCON_BASIS, BasisSet


class CouplingMap:
    """Undirected, connected physical-qubit connectivity graph."""

    def __init__(
        self,
        n: int,
        edges: Iterable[Sequence[int]],
        coords: Sequence[Sequence[float]] | None = None,
    ):
        if n < 1:
            raise ConfigurationError("coupling map needs at least one qubit")
        norm = set()
        for a, b in edges:
            a, b = int(a), int(b)
            if a == b:
                raise ConfigurationError(f"self-loop on qubit {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise ConfigurationError(f"edge ({a},{b}) out of range for {n} qubits")
            norm.add((min(a, b), max(a, b)))
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(norm))
        self.neighbors: tuple[tuple[int, ...], ...] = tuple(
            tuple(sorted({b for a, b in self.edges if a == q} | {a for a, b in self.edges if b == q}))
            for q in range(n)
        )
        self._edge_set = frozenset(norm)
        if coords is not None:
            if len(coords) != n:
                raise ConfigurationError("coords must list one point per qubit")
            coords = tuple((float(x), float(y)) for x, y in coords)
        self.coords = coords
        self.distance_matrix = self._all_pairs_bfs()
        if (self.distance_matrix < 0).any():
            raise ConfigurationError("coupling map is not connected")
        self.distance_matrix.setflags(write=False)

    def _all_pairs_bfs(self) -> np.ndarray:
        dist = np.full((self.n, self.n), -1, dtype=np.int64)
        for src in range(self.n):
            row = dist[src]
            row[src] = 0
            queue = deque([src])
            while queue:
                u = queue.popleft()
                for v in self.neighbors[u]:
                    if row[v] < 0:
                        row[v] = row[u] + 1
                        queue.append(v)
        return dist

    def coupled(self, a: int, b: int) -> bool:
        return (a, b) in self._edge_set if a < b else (b, a) in self._edge_set

    def degree(self, q: int) -> int:
        return len(self.neighbors[q])

    def distance(self, a: int, b: int) -> int:
        if not (0 <= a < self.n and 0 <= b < self.n):
            raise IndexError(f"qubit index out of range for {self.n} qubits")
        return int(self.distance_matrix[a, b])

    def eccentricity(self) -> np.ndarray:
        return self.distance_matrix.max(axis=1)

    def center(self) -> list[int]:
        ecc = self.eccentricity()
        return [int(q) for q in np.flatnonzero(ecc == ecc.min())]

    def leaves(self) -> list[int]:
        return [q for q in range(self.n) if self.degree(q) == 1]

    def has_triangle(self) -> bool:
        for a, b in self.edges:
            if set(self.neighbors[a]) & set(self.neighbors[b]):
                return True
        return False

    def induced_edge_count(self, qubits: Iterable[int]) -> int:
        s = set(qubits)
        return sum(1 for a, b in self.edges if a in s and b in s)

    def __eq__(self, other) -> bool:
        return isinstance(other, CouplingMap) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"CouplingMap(n={self.n}, edges={len(self.edges)})"


@dataclass(frozen=True, eq=False)
class ArchitectureSpec:
    name: str
    coupling: CouplingMap
    basis: BasisSet = field(default_factory=lambda: BasisSet(FALCON_BASIS))
    dt: float = 1.0  # carried for completeness; scheduling is not performed

    @property
    def n(self) -> int:
        return self.coupling.n

    def distance(self, a: int, b: int) -> int:
        return self.coupling.distance(a, b)

    def to_json(self) -> dict:
        doc = {
            "name": self.name,
            "n": self.n,
            "edges": [list(e) for e in self.coupling.edges],
            "basis": list(self.basis.kinds),
            "dt": self.dt,
        }
        if self.coupling.coords is not None:
            doc["coords"] = [list(p) for p in self.coupling.coords]
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "ArchitectureSpec":
        try:
            coupling = CouplingMap(int(doc["n"]), doc["edges"], doc.get("coords"))
            return cls(
                name=str(doc["name"]),
                coupling=coupling,
                basis=BasisSet(doc.get("basis", FALCON_BASIS)),
                dt=float(doc.get("dt", 1.0)),
            )
        except KeyError as exc:
            raise ConfigurationError(f"architecture document missing field {exc}") from None


def distance(arch: ArchitectureSpec, a: int, b: int) -> int:
    return arch.distance(a, b)


# ---------------------------------------------------------------------------
# presets and generators

FALCON_R4_EDGES = (
    (0, 1), (1, 2), (1, 4), (2, 3), (3, 5), (4, 7), (5, 8), (6, 7), (7, 10),
    (8, 9), (8, 11), (10, 12), (11, 14), (12, 13), (12, 15), (13, 14), (14, 16),
    (15, 18), (16, 19), (17, 18), (18, 21), (19, 20), (19, 22), (21, 23),
    (22, 25), (23, 24), (24, 25), (25, 26),
)

# (column, row) draw positions of the usual heavy-hex rendering
FALCON_R4_COORDS = (
    (0, 1), (1, 1), (1, 2), (1, 3), (2, 1), (2, 3), (3, 0), (3, 1), (3, 3),
    (3, 4), (4, 1), (4, 3), (5, 1), (5, 2), (5, 3), (6, 1), (6, 3), (7, 0),
    (7, 1), (7, 3), (7, 4), (8, 1), (8, 3), (9, 1), (9, 2), (9, 3), (10, 3),
)


def falcon_r4() -> ArchitectureSpec:
    return ArchitectureSpec(
        name="falcon-r4",
        coupling=CouplingMap(27, FALCON_R4_EDGES, FALCON_R4_COORDS),
        basis=BasisSet(FALCON_BASIS),
    )


def _spec(name, n, edges, coords, basis):
    return ArchitectureSpec(name, CouplingMap(n, edges, coords), BasisSet(basis or FALCON_BASIS))


def line(n: int, basis=None) -> ArchitectureSpec:
    if n < 1:
        raise ConfigurationError("line needs n >= 1")
    return _spec(f"line-{n}", n, [(i, i + 1) for i in range(n - 1)], [(i, 0) for i in range(n)], basis)


def ring(n: int, basis=None) -> ArchitectureSpec:
    if n < 3:
        raise ConfigurationError("ring needs n >= 3")
    edges = [(i, (i + 1) % n) for i in range(n)]
    coords = [(float(np.cos(2 * np.pi * i / n)) * n / 4, float(np.sin(2 * np.pi * i / n)) * n / 4) for i in range(n)]
    return _spec(f"ring-{n}", n, edges, coords, basis)


def grid(w: int, h: int, basis=None) -> ArchitectureSpec:
    if w < 1 or h < 1:
        raise ConfigurationError("grid dimensions must be positive")
    edges = []
    for r in range(h):
        for c in range(w):
            q = r * w + c
            if c + 1 < w:
                edges.append((q, q + 1))
            if r + 1 < h:
                edges.append((q, q + w))
    coords = [(c, r) for r in range(h) for c in range(w)]
    return _spec(f"grid-{w}x{h}", w * h, edges, coords, basis)


def heavy_hex(distance: int, basis=None) -> ArchitectureSpec:
    """Heavy-hex lattice: a brick-wall honeycomb with a qubit on every vertex and edge.

    ``distance`` rows of ``distance`` hexagonal cells.  Indexing runs row by
    row over the honeycomb vertices (horizontal chains already include the
    edge qubits), followed by the bridge qubits on vertical edges.
    """
    if distance < 1:
        raise ConfigurationError("heavy-hex distance must be positive")
    rows = distance + 1
    cols = 2 * distance + 2
    # horizontal chain qubits: each honeycomb row becomes a chain with an
    # extra qubit between neighbours, i.e. 2*cols - 1 sites
    chain = 2 * cols - 1
    index: dict[tuple[int, int], int] = {}
    coords: list[tuple[float, float]] = []
    edges: list[tuple[int, int]] = []
    for r in range(rows):
        for s in range(chain):
            index[(r, s)] = len(coords)
            coords.append((s, 2 * r))
        for s in range(chain - 1):
            edges.append((index[(r, s)], index[(r, s + 1)]))
    for r in range(rows - 1):
        for c in range(cols):
            if (r + c) % 2 == 0:
                b = len(coords)
                coords.append((2 * c, 2 * r + 1))
                edges.append((index[(r, 2 * c)], b))
                edges.append((b, index[(r + 1, 2 * c)]))
    # chain ends beyond the last bridge dangle; peel them off repeatedly
    alive = set(range(len(coords)))
    while True:
        deg = dict.fromkeys(alive, 0)
        for a, b in edges:
            if a in alive and b in alive:
                deg[a] += 1
                deg[b] += 1
        loose = {q for q, k in deg.items() if k <= 1}
        if not loose or len(loose) == len(alive):
            break
        alive -= loose
    keep = sorted(alive)
    remap = {q: i for i, q in enumerate(keep)}
    edges = [(remap[a], remap[b]) for a, b in edges if a in remap and b in remap]
    coords = [coords[q] for q in keep]
    return _spec(f"heavy-hex-{distance}", len(keep), edges, coords, basis)


def subgraph(arch: ArchitectureSpec, vertices: Iterable[int], name: str | None = None) -> ArchitectureSpec:
    """Induced sub-architecture on ``vertices``, relabelled in ascending order."""
    keep = sorted(set(int(v) for v in vertices))
    remap = {q: i for i, q in enumerate(keep)}
    edges = [(remap[a], remap[b]) for a, b in arch.coupling.edges if a in remap and b in remap]
    coords = None if arch.coupling.coords is None else [arch.coupling.coords[q] for q in keep]
    return ArchitectureSpec(
        name or f"{arch.name}[{','.join(map(str, keep))}]",
        CouplingMap(len(keep), edges, coords),
        arch.basis,
        arch.dt,
    )


def load_architecture(ref: str) -> ArchitectureSpec:
    """Resolve ``falcon-r4``, ``line:N``, ``ring:N``, ``grid:WxH``, ``heavy-hex:D`` or a JSON path."""
    ref = ref.strip()
    kind, _, arg = ref.partition(":")
    try:
        if kind == "falcon-r4":
            return falcon_r4()
        if kind == "line":
            return line(int(arg))
        if kind == "ring":
            return ring(int(arg))
        if kind == "grid":
            w, h = arg.lower().split("x")
            return grid(int(w), int(h))
        if kind == "heavy-hex":
            return heavy_hex(int(arg))
    except ValueError as exc:
        raise ConfigurationError(f"bad architecture reference {ref!r}: {exc}") from None
    path = Path(ref)
    if path.suffix == ".json" and path.exists():
        return ArchitectureSpec.from_json(json.loads(path.read_text()))
    raise ConfigurationError(f"unknown architecture {ref!r}")
