"""Initial layout passes: trivial, subgraph-monomorphism (VF2 style) and dense."""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from ..architecture import ArchitectureSpec
from ..circuit import Circuit
from ..errors import CapacityError


class Layout:
    """Injective map from virtual indices ``0..k-1`` to physical qubits."""

    __slots__ = ("v2p",)

    def __init__(self, v2p: Sequence[int]):
        v2p = tuple(int(p) for p in v2p)
        if len(set(v2p)) != len(v2p):
            raise ValueError(f"layout is not injective: {v2p}")
        self.v2p = v2p

    @classmethod
    def from_dict(cls, mapping: Mapping[int, int]) -> "Layout":
        return cls([mapping[v] for v in range(len(mapping))])

    @property
    def virtual_to_physical(self) -> dict[int, int]:
        return dict(enumerate(self.v2p))

    @property
    def physical_to_virtual(self) -> dict[int, int]:
        return {p: v for v, p in enumerate(self.v2p)}

    def __getitem__(self, v: int) -> int:
        return self.v2p[v]

    def __len__(self) -> int:
        return len(self.v2p)

    def __eq__(self, other) -> bool:
        return isinstance(other, Layout) and self.v2p == other.v2p

    def __hash__(self) -> int:
        return hash(self.v2p)

    def __repr__(self) -> str:
        return f"Layout({list(self.v2p)})"

    def image(self) -> frozenset[int]:
        return frozenset(self.v2p)

    def fill(self, n: int) -> "Layout":
        """Extend to a bijection on ``n`` physical qubits.

        Extra (ancilla) virtual indices take the unused physical qubits in
        ascending order.
        """
        if len(self.v2p) > n or any(p >= n for p in self.v2p):
            raise CapacityError(f"layout does not fit {n} physical qubits")
        used = set(self.v2p)
        free = [p for p in range(n) if p not in used]
        return Layout(self.v2p + tuple(free))

    def restrict(self, k: int) -> "Layout":
        return Layout(self.v2p[:k])


def _check_capacity(c: Circuit, arch: ArchitectureSpec) -> None:
    if c.width > arch.n:
        raise CapacityError(f"circuit has {c.width} qubits, architecture only {arch.n}")


def interaction_edges(c: Circuit) -> set[tuple[int, int]]:
    edges = set()
    for ins in c.instructions:
        if len(ins.qubits) == 2:
            a, b = ins.qubits
            edges.add((a, b) if a < b else (b, a))
    return edges


def is_perfect(c: Circuit, layout: Layout, arch: ArchitectureSpec) -> bool:
    """True when every two-qubit interaction lands on a coupled pair."""
    cm = arch.coupling
    return all(cm.coupled(layout[a], layout[b]) for a, b in interaction_edges(c))


def trivial_layout(c: Circuit, arch: ArchitectureSpec) -> tuple[Layout, bool]:
    """Identity placement and whether it already satisfies connectivity."""
    _check_capacity(c, arch)
    layout = Layout(range(c.width))
    return layout, is_perfect(c, layout, arch)


# ---------------------------------------------------------------------------
# subgraph monomorphism

def _has_triangle(adj: list[set[int]]) -> bool:
    for u, nbrs in enumerate(adj):
        for v in nbrs:
            if v > u and adj[u] & adj[v]:
                return True
    return False


def vf2_layout(c: Circuit, arch: ArchitectureSpec, node_limit: int = 10_000) -> Layout | None:
    """Find a perfect layout by monomorphism search, or ``None``.

    Only virtual qubits that take part in a two-qubit gate are searched: they
    are assigned in index order, trying physical qubits in ascending order, so
    the first complete mapping found is the lexicographically smallest
    placement of the interacting qubits.  Idle virtual qubits then take the
    lowest free physical qubits.  Pruning follows the VF2 feasibility
    rules for monomorphisms: adjacency to already-mapped neighbours, degree,
    and a look-ahead on unmapped neighbours versus free physical neighbours.
    ``node_limit`` caps the number of search states visited.
    """
    _check_capacity(c, arch)
    q = c.width
    n = arch.n
    cm = arch.coupling
    padj: list[set[int]] = [set() for _ in range(q)]
    for a, b in interaction_edges(c):
        padj[a].add(b)
        padj[b].add(a)
    tadj = [set(nb) for nb in cm.neighbors]

    # cheap global rejections
    if sum(len(s) for s in padj) // 2 > len(cm.edges):
        return None
    pdeg = sorted((len(s) for s in padj), reverse=True)
    tdeg = sorted((len(s) for s in tadj), reverse=True)
    if any(pd > td for pd, td in zip(pdeg, tdeg)):
        return None
    if not cm.has_triangle() and _has_triangle(padj):
        return None

    mapping = [-1] * q
    used = [False] * n
    states = 0

    def feasible(v: int, p: int) -> bool:
        if len(padj[v]) > len(tadj[p]):
            return False
        unmapped = 0
        for u in padj[v]:
            pu = mapping[u]
            if pu >= 0:
                if pu not in tadj[p]:
                    return False
            else:
                unmapped += 1
        if unmapped:
            free_nb = sum(1 for w in tadj[p] if not used[w])
            if unmapped > free_nb:
                return False
        return True

    order = [v for v in range(q) if padj[v]]

    def search(i: int) -> bool:
        nonlocal states
        if i == len(order):
            return True
        v = order[i]
        for p in range(n):
            if used[p]:
                continue
            states += 1
            if states > node_limit:
                return False
            if not feasible(v, p):
                continue
            mapping[v] = p
            used[p] = True
            if search(i + 1):
                return True
            mapping[v] = -1
            used[p] = False
            if states > node_limit:
                return False
        return False

    if not search(0):
        return None
    free = iter(p for p in range(n) if not used[p])
    return Layout([p if p >= 0 else next(free) for p in mapping])


# ---------------------------------------------------------------------------
# dense

def dense_subset(arch: ArchitectureSpec, k: int) -> tuple[int, ...]:
    """Greedy BFS-grown ``k``-subset with the most induced edges.

    From every start vertex the subset grows by the boundary vertex adding
    the most induced edges (ties to the smallest index).  The best subset over
    all starts wins; ties go to the lexicographically smallest sorted subset.
    """
    cm = arch.coupling
    if k > cm.n:
        raise CapacityError(f"cannot pick {k} of {cm.n} qubits")
    best_key = None
    best: tuple[int, ...] = ()
    for start in range(cm.n):
        chosen = {start}
        edges = 0
        while len(chosen) < k:
            pick, gain = -1, -1
            for u in sorted(chosen):
                for w in cm.neighbors[u]:
                    if w in chosen:
                        continue
                    g = sum(1 for x in cm.neighbors[w] if x in chosen)
                    if g > gain or (g == gain and w < pick):
                        pick, gain = w, g
            if pick < 0:
                # disconnected remainder cannot happen on a connected map
                break
            chosen.add(pick)
            edges += gain
        subset = tuple(sorted(chosen))
        key = (-edges, subset)
        if best_key is None or key < best_key:
            best_key = key
            best = subset
    return best


def dense_layout(c: Circuit, arch: ArchitectureSpec) -> Layout:
    _check_capacity(c, arch)
    return Layout(dense_subset(arch, c.width))


def layout_from_physical(qubits: Iterable[int]) -> Layout:
    return Layout(list(qubits))
