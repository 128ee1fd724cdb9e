"""Independent ground truth: Bron-Kerbosch, transversal checking, exact minimum.

Nothing here looks at elimination orderings or tree-decompositions.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .graph import Graph


class CapExceeded(Exception):
    """The minimum clique transversal is larger than the requested cap."""

    def __init__(self, cap: int, explored: int):
        super().__init__(f"minimum clique transversal exceeds cap {cap}")
        self.cap = cap
        self.explored = explored


@dataclass(frozen=True)
class OracleResult:
    minimum_size: int
    witness: frozenset[int]
    explored: int


def bron_kerbosch(g: Graph) -> set[frozenset[int]]:
    """All inclusion-maximal cliques, with Tomita-style pivoting."""
    adj = g.adj
    out: set[frozenset[int]] = set()

    def expand(r, p, x):
        if not p and not x:
            out.add(frozenset(r))
            return
        pivot = max(p | x, key=lambda u: (len(p & adj[u]), -u))
        for v in sorted(p - adj[pivot]):
            expand(r | {v}, p & adj[v], x & adj[v])
            p = p - {v}
            x = x | {v}

    expand(frozenset(), frozenset(range(g.n)), frozenset())
    return out


def _hyperedges(g: Graph) -> list[frozenset[int]]:
    return sorted((c for c in bron_kerbosch(g) if len(c) >= 2), key=lambda c: (len(c), sorted(c)))


def is_transversal(g: Graph, s: Iterable[int]) -> frozenset[int] | None:
    """Return None if ``s`` meets every non-trivial maximal clique, else a missed clique."""
    s = set(s)
    for c in _hyperedges(g):
        if not c & s:
            return c
    return None


def min_transversal_exact(g: Graph, size_cap: int | None = None) -> OracleResult:
    """Iterative deepening over hitting sets of the maximal-clique hypergraph.

    Branches on the smallest unhit clique.  Raises :class:`CapExceeded`
    rather than returning a wrong number.
    """
    edges = _hyperedges(g)
    if not edges:
        return OracleResult(0, frozenset(), 1)
    cap = g.n if size_cap is None else size_cap
    explored = 0

    def search(chosen, budget):
        nonlocal explored
        explored += 1
        unhit = None
        for c in edges:
            if not c & chosen:
                unhit = c
                break
        if unhit is None:
            return chosen
        if budget == 0:
            return None
        for v in sorted(unhit):
            found = search(chosen | {v}, budget - 1)
            if found is not None:
                return found
        return None

    for size in range(1, cap + 1):
        found = search(frozenset(), size)
        if found is not None:
            return OracleResult(size, found, explored)
    raise CapExceeded(cap, explored)


def min_transversal_naive(g: Graph) -> int:
    """Full subset enumeration; only for tiny graphs."""
    edges = _hyperedges(g)
    for size in range(g.n + 1):
        for s in combinations(range(g.n), size):
            s = set(s)
            if all(c & s for c in edges):
                return size
    raise AssertionError("unreachable")
