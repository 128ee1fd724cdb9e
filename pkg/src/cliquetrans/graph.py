"""Graphs, chordality recognition and maximal cliques of chordal graphs.

Vertices are dense integers ``0..n-1``.  Graph files are 1-indexed:

    c optional comment
    p <n> <m>
    e <u> <v>
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Mapping


class GraphParseError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[frozenset[int], ...]

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise ValueError("adjacency length does not match n")
        for v, nbrs in enumerate(self.adj):
            if v in nbrs:
                raise ValueError(f"self-loop at {v}")
            for u in nbrs:
                if not 0 <= u < self.n or v not in self.adj[u]:
                    raise ValueError(f"asymmetric or out-of-range edge {v}-{u}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(n, tuple(frozenset(s) for s in nbrs))

    @classmethod
    def from_cliques(cls, n: int, cliques: Iterable[Iterable[int]]) -> "Graph":
        edges = []
        for c in cliques:
            c = sorted(c)
            edges.extend((a, b) for i, a in enumerate(c) for b in c[i + 1:])
        return cls.from_edges(n, edges)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    @property
    def m(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def as_dict(self) -> dict[int, frozenset[int]]:
        return dict(enumerate(self.adj))

    def to_text(self) -> str:
        lines = [f"p {self.n} {self.m}"]
        lines.extend(f"e {u + 1} {v + 1}" for u, v in self.edges())
        return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    n = None
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise GraphParseError(lineno, "duplicate header")
            if len(parts) != 3:
                raise GraphParseError(lineno, "header must be 'p <n> <m>'")
            try:
                n, m = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphParseError(lineno, "non-integer header field") from None
            if n < 0 or m < 0:
                raise GraphParseError(lineno, "negative header field")
        elif parts[0] == "e":
            if n is None:
                raise GraphParseError(lineno, "edge before header")
            if len(parts) != 3:
                raise GraphParseError(lineno, "edge must be 'e <u> <v>'")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphParseError(lineno, "non-integer endpoint") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphParseError(lineno, f"vertex id out of range 1..{n}")
            if u == v:
                raise GraphParseError(lineno, f"self-loop at {u}")
            edges.add((min(u, v) - 1, max(u, v) - 1))
        else:
            raise GraphParseError(lineno, f"unknown line type {parts[0]!r}")
    if n is None:
        raise GraphParseError(0, "missing header")
    return Graph.from_edges(n, sorted(edges))


# --- chordality on plain adjacency mappings; the engine calls these on work graphs

Adjacency = Mapping[int, "frozenset[int] | set[int]"]


def mcs_order(adj: Adjacency) -> list[int]:
    """Maximum cardinality search; the reverse visit order is a PEO iff chordal."""
    weight = {v: 0 for v in adj}
    visited = []
    remaining = set(adj)
    while remaining:
        v = max(remaining, key=lambda x: (weight[x], -x))
        remaining.remove(v)
        visited.append(v)
        for u in adj[v]:
            if u in remaining:
                weight[u] += 1
    visited.reverse()
    return visited


def peo_violation(adj: Adjacency, order: list[int]) -> int | None:
    """Return a vertex whose later neighbours are not a clique, or None."""
    pos = {v: i for i, v in enumerate(order)}
    for v in order:
        later = [u for u in adj[v] if pos[u] > pos[v]]
        if len(later) < 2:
            continue
        p = min(later, key=pos.__getitem__)
        for u in later:
            if u != p and u not in adj[p]:
                return v
    return None


def induced_cycle(adj: Adjacency) -> list[int] | None:
    """Find a chordless cycle of length >= 4, or None if the graph is chordal."""
    for v in sorted(adj):
        nbrs = sorted(adj[v])
        for i, x in enumerate(nbrs):
            for y in nbrs[i + 1:]:
                if y in adj[x]:
                    continue
                blocked = set(adj[v]) | {v}
                blocked.discard(x)
                blocked.discard(y)
                path = _shortest_path(adj, x, y, blocked)
                if path is not None:
                    return [v] + path
    return None


def _shortest_path(adj, src, dst, blocked):
    prev = {src: None}
    queue = deque([src])
    while queue:
        a = queue.popleft()
        if a == dst:
            path = []
            while a is not None:
                path.append(a)
                a = prev[a]
            return path[::-1]
        for b in sorted(adj[a]):
            if b not in prev and b not in blocked:
                prev[b] = a
                queue.append(b)
    return None


def cliques_from_peo(adj: Adjacency, order: list[int]) -> list[frozenset[int]]:
    """Maximal cliques of a chordal graph, sorted by their sorted vertex tuples."""
    pos = {v: i for i, v in enumerate(order)}
    cands = []
    for v in order:
        cands.append(frozenset([v, *(u for u in adj[v] if pos[u] > pos[v])]))
    cands.sort(key=len, reverse=True)
    result: list[frozenset[int]] = []
    for c in cands:
        if not any(c <= d for d in result):
            result.append(c)
    return sorted(result, key=lambda c: sorted(c))


def chordal_cliques(adj: Adjacency) -> list[frozenset[int]]:
    order = mcs_order(adj)
    if peo_violation(adj, order) is not None:
        raise ValueError("graph is not chordal")
    return cliques_from_peo(adj, order)


def components_of(adj: Adjacency) -> list[list[int]]:
    seen = set()
    blocks = []
    for s in sorted(adj):
        if s in seen:
            continue
        seen.add(s)
        block = [s]
        queue = deque([s])
        while queue:
            a = queue.popleft()
            for b in adj[a]:
                if b not in seen:
                    seen.add(b)
                    block.append(b)
                    queue.append(b)
        blocks.append(sorted(block))
    return blocks


# --- public operations on Graph


@dataclass(frozen=True)
class ChordalityResult:
    peo: list[int] | None
    cycle: list[int] | None

    def __bool__(self) -> bool:
        return self.peo is not None


def is_chordal(g: Graph) -> ChordalityResult:
    adj = g.as_dict()
    order = mcs_order(adj)
    if peo_violation(adj, order) is None:
        return ChordalityResult(order, None)
    return ChordalityResult(None, induced_cycle(adj))


def maximal_cliques(g: Graph, peo: list[int]) -> list[frozenset[int]]:
    if sorted(peo) != list(range(g.n)):
        raise ValueError("peo is not a permutation of the vertices")
    adj = g.as_dict()
    if peo_violation(adj, peo) is not None:
        raise ValueError("peo is not a perfect elimination ordering")
    return cliques_from_peo(adj, peo)


@dataclass(frozen=True)
class FourChordalResult:
    ok: bool
    edge: tuple[int, int] | None = None
    cycle: list[int] | None = None

    def __bool__(self) -> bool:
        return self.ok


def four_chordal_witness(adj: Adjacency) -> FourChordalResult:
    order = mcs_order(adj)
    if peo_violation(adj, order) is not None:
        return FourChordalResult(False, cycle=induced_cycle(adj))
    big = [c for c in cliques_from_peo(adj, order) if len(c) >= 4]
    for u in sorted(adj):
        for v in sorted(adj[u]):
            if u < v and not any(u in c and v in c for c in big):
                return FourChordalResult(False, edge=(u, v))
    return FourChordalResult(True)


def is_four_chordal(g: Graph) -> FourChordalResult:
    return four_chordal_witness(g.as_dict())


def count_maximal_triangles(g: Graph) -> int:
    return sum(1 for c in chordal_cliques(g.as_dict()) if len(c) == 3)


def connected_components(g: Graph) -> list[list[int]]:
    return components_of(g.as_dict())
