"""Extremal 4-chordal families, complete graphs and a seeded random corpus."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .graph import Graph, four_chordal_witness

H0_CONNECTOR = ("a''", "a'''", "d", "d'")


@dataclass(frozen=True)
class GenSpec:
    kind: str
    params: dict = field(default_factory=dict)

    def build(self) -> Graph:
        if self.kind == "hk":
            return h_graph(int(self.params["k"]))
        if self.kind == "lower":
            return lower_bound_graph(int(self.params["n"]))
        if self.kind == "complete":
            return complete_graph(int(self.params["n"]))
        if self.kind == "random":
            return random_four_chordal(
                int(self.params["seed"]),
                int(self.params.get("nodes", 10)),
                int(self.params.get("max_bag", 6)),
            )
        raise ValueError(f"unknown generator kind {self.kind!r}")


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete_graph needs n >= 1")
    return Graph.from_cliques(n, [range(n)])


def h_labels(k: int) -> list[str]:
    """Vertex names of H_k in id order."""
    names = ["a", "a'", "a''", "a'''", "d", "d'", "d''", "d'''"]
    for i in range(1, k + 1):
        names += [f"b{i}", f"b{i}'", f"b{i}''", f"c{i}", f"c{i}'", f"c{i}''", f"c{i}'''"]
    return names


def h_cliques(k: int) -> tuple[list[list[str]], list[list[str]]]:
    """(the 2k+2 disjoint cliques, the connecting 4-cliques) of H_k by name."""
    disjoint = [["a", "a'", "a''", "a'''"], ["d", "d'", "d''", "d'''"]]
    connect = []
    for i in range(1, k + 1):
        disjoint.append([f"b{i}", f"b{i}'", f"b{i}''"])
        disjoint.append([f"c{i}", f"c{i}'", f"c{i}''", f"c{i}'''"])
        connect.append([f"b{i}'", f"b{i}''", f"c{i}", f"c{i}'"])
    for i in range(1, k):
        connect.append([f"b{i}", f"b{i}''", f"b{i + 1}", f"b{i + 1}'"])
    if k >= 1:
        connect.append(["a''", "a'''", "b1", "b1'"])
        connect.append([f"b{k}", f"b{k}''", "d", "d'"])
    else:
        connect.append(list(H0_CONNECTOR))
    return disjoint, connect


def h_graph(k: int) -> Graph:
    if k < 0:
        raise ValueError("h_graph needs k >= 0")
    ids = {name: i for i, name in enumerate(h_labels(k))}
    disjoint, connect = h_cliques(k)
    return Graph.from_cliques(len(ids), [[ids[x] for x in c] for c in disjoint + connect])


def lower_bound_graph(n: int) -> Graph:
    """An n-vertex 4-chordal graph whose clique transversal number is floor(2(n-1)/7)."""
    if n < 5:
        raise ValueError("lower_bound_graph needs n >= 5")
    if n <= 7:
        return complete_graph(n)
    k = (n - 8) // 7
    z = (n - 1) % 7
    base = h_graph(k)
    size = base.n
    cliques = [[u, v] for u, v in base.edges()]
    d = list(range(4, 8))  # d, d', d'', d'''
    extra = list(range(size, size + z))
    if z <= 3:
        cliques.extend([*d, e] for e in extra)
    else:
        cliques.append(extra)
        cliques.append([extra[0], extra[1], d[2], d[3]])
    return Graph.from_cliques(n, cliques)


def random_four_chordal(seed: int, target_nodes: int, max_bag: int,
                        triangle_rate: float = 0.2, tight_rate: float = 0.0) -> Graph:
    """Random 4-chordal graph grown as a tree of bags.

    Each new bag takes a random subset of its parent plus fresh vertices.
    About ``triangle_rate`` of the bags are maximal 3-cliques whose uncovered
    edges get sibling 4-clique bags.  A ``tight_rate`` share of the bags are
    4-cliques overlapping their parent in two or three vertices, which gives
    long chains of small cliques.  Vertex ids are shuffled at the end.
    """
    if target_nodes < 1:
        raise ValueError("target_nodes must be >= 1")
    if not 4 <= max_bag <= 12:
        raise ValueError("max_bag must lie in 4..12")
    attempt = 0
    while True:
        g = _grow(random.Random(f"{seed}:{attempt}"), target_nodes, max_bag,
                  triangle_rate, tight_rate)
        if four_chordal_witness(g.as_dict()):
            return g
        attempt += 1
        if attempt > 50:
            raise RuntimeError("random generator failed to produce a 4-chordal graph")


def _grow(rng: random.Random, target_nodes: int, max_bag: int, triangle_rate: float,
          tight_rate: float) -> Graph:
    count = 0

    def fresh(m):
        nonlocal count
        out = list(range(count, count + m))
        count += m
        return out

    if target_nodes == 1:
        return Graph.from_cliques(max_bag, [range(max_bag)])
    bags: list[list[int]] = [fresh(rng.randint(4, max_bag))]
    open_bags = [0]
    while len(bags) < target_nodes:
        parent = bags[rng.choice(open_bags)]
        if rng.random() < triangle_rate:
            shared = rng.sample(parent, rng.randint(1, 2))
            tri = shared + fresh(3 - len(shared))
            bags.append(tri)
            covered = {frozenset(shared)} if len(shared) == 2 else set()
            for i, a in enumerate(tri):
                for b in tri[i + 1:]:
                    if frozenset((a, b)) not in covered:
                        bags.append([a, b] + fresh(2))
                        open_bags.append(len(bags) - 1)
            continue
        if rng.random() < tight_rate:
            size, share = 4, rng.choice((2, 3, 3))
        else:
            size = rng.randint(4, max_bag)
            share = rng.randint(1, min(len(parent), size - 1))
            if rng.random() < 0.05:
                share = 0
        bag = rng.sample(parent, share) + fresh(size - share)
        bags.append(bag)
        open_bags.append(len(bags) - 1)
    perm = list(range(count))
    rng.shuffle(perm)
    return Graph.from_cliques(count, [[perm[v] for v in b] for b in bags])


def fuzz_graph(seed: int, index: int, min_n: int = 5, max_n: int = 60,
               max_nodes: int = 16) -> Graph:
    """The ``index``-th graph of the fuzz corpus for ``seed``, with min_n <= n <= max_n."""
    if max_n < min_n or max_n < 4:
        raise ValueError("empty vertex-count range")
    rng = random.Random(f"fuzz:{seed}:{index}")
    while True:
        nodes = rng.randint(1, max_nodes)
        max_bag = rng.randint(4, 7)
        g = random_four_chordal(rng.randrange(2**31), nodes, max_bag,
                                triangle_rate=rng.choice((0.0, 0.2, 0.4)),
                                tight_rate=rng.choice((0.0, 0.5, 0.9)))
        if min_n <= g.n <= max_n:
            return g
