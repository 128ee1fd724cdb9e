"""Clique trees and nice tree-decompositions of 4-chordal graphs."""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Iterable, Mapping

from .graph import (
    Adjacency,
    Graph,
    chordal_cliques,
    components_of,
    four_chordal_witness,
    maximal_cliques,
)


class DecompositionError(ValueError):
    pass


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset[int], ...]
    parent: tuple[int | None, ...]
    root: int | None = 0

    def __len__(self) -> int:
        return len(self.bags)

    def children(self) -> list[list[int]]:
        kids: list[list[int]] = [[] for _ in self.bags]
        for x, p in enumerate(self.parent):
            if p is not None:
                kids[p].append(x)
        return kids

    def tree_edges(self) -> list[tuple[int, int]]:
        return [(p, x) for x, p in enumerate(self.parent) if p is not None]

    def to_json(self) -> list[dict]:
        return [
            {"id": x, "bag": sorted(b), "parent": self.parent[x]}
            for x, b in enumerate(self.bags)
        ]


@dataclass(frozen=True)
class NiceDecomposition(TreeDecomposition):
    # number of subdivision/contraction steps performed while building
    steps: int = 0
    # node id of the input tree each node descends from; None for inserted nodes
    origin: tuple[int | None, ...] = ()


@dataclass(frozen=True)
class Branch:
    root_node: int
    alpha: int
    beta: int
    node_set: frozenset[int]


def clique_tree(adj: Adjacency) -> tuple[list[frozenset[int]], list[tuple[int, int]]]:
    """Bags are the non-trivial maximal cliques; edges form a max-weight spanning tree."""
    bags = [c for c in chordal_cliques(adj) if len(c) >= 2]
    return bags, _spanning_tree(bags)


def _spanning_tree(bags: list[frozenset[int]]) -> list[tuple[int, int]]:
    cand = sorted(
        ((-len(bags[i] & bags[j]), i, j) for i in range(len(bags)) for j in range(i + 1, len(bags))),
    )
    leader = list(range(len(bags)))

    def find(x):
        while leader[x] != x:
            leader[x] = leader[leader[x]]
            x = leader[x]
        return x

    edges = []
    for _, i, j in cand:
        a, b = find(i), find(j)
        if a != b:
            leader[a] = b
            edges.append((i, j))
    return edges


def maximal_clique_tree(g: Graph, peo: list[int]) -> TreeDecomposition:
    bags = [c for c in maximal_cliques(g, peo) if len(c) >= 2]
    if not bags:
        raise DecompositionError("graph has no edges; no non-trivial clique to host a node")
    edges = _spanning_tree(bags)
    parent = _orient(len(bags), edges, 0)
    return TreeDecomposition(tuple(bags), tuple(parent[x] for x in range(len(bags))), 0)


def _orient(count, edges, root):
    nbr = defaultdict(list)
    for a, b in edges:
        nbr[a].append(b)
        nbr[b].append(a)
    parent = {root: None}
    queue = deque([root])
    while queue:
        a = queue.popleft()
        for b in sorted(nbr[a]):
            if b not in parent:
                parent[b] = a
                queue.append(b)
    if len(parent) != count:
        raise DecompositionError("tree edges do not connect all nodes")
    return parent


def make_nice(
    bags: Mapping[int, frozenset[int]],
    edges: Iterable[tuple[int, int]],
    root: int,
) -> NiceDecomposition:
    """Subdivide and contract a rooted tree-decomposition into a nice one.

    Any non-root node whose bag has k >= 5 vertices and at least two vertices
    outside its parent gets a new parent holding the bag minus its
    largest-id private vertex; afterwards adjacent equal bags are merged
    child-into-parent.  Node ids are renumbered breadth-first from the root.
    """
    bags = dict(bags)
    parent = _orient(len(bags), list(edges), root)
    origin = {x: x for x in bags}
    next_id = max(bags) + 1
    steps = 0
    for x in list(parent):
        cur = x
        while parent[cur] is not None:
            bag = bags[cur]
            priv = bag - bags[parent[cur]]
            if len(bag) < 5 or len(priv) < 2:
                break
            new = next_id
            next_id += 1
            bags[new] = bag - {max(priv)}
            origin[new] = None
            parent[new] = parent[cur]
            parent[cur] = new
            steps += 1
            cur = new

    children = defaultdict(list)
    for x, p in parent.items():
        if p is not None:
            children[p].append(x)
    stack = [root]
    while stack:
        x = stack.pop()
        for c in list(children[x]):
            if bags[c] == bags[x]:
                children[x].remove(c)
                for gc in children.pop(c, []):
                    parent[gc] = x
                    children[x].append(gc)
                del parent[c], bags[c]
                steps += 1
                stack.append(x)
                break
        else:
            stack.extend(children[x])

    order = [root]
    renum = {root: 0}
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        for c in sorted(children[x], key=lambda c: sorted(bags[c])):
            renum[c] = len(order)
            order.append(c)
    return NiceDecomposition(
        bags=tuple(bags[x] for x in order),
        parent=tuple(None if parent[x] is None else renum[parent[x]] for x in order),
        root=0,
        steps=steps,
        origin=tuple(origin[x] for x in order),
    )


def nice_from_adj(adj: Adjacency, root_clique: Iterable[int]) -> NiceDecomposition:
    """Nice decomposition of a connected 4-chordal work graph rooted at ``root_clique``."""
    root_clique = frozenset(root_clique)
    bags, edges = clique_tree(adj)
    host = min(
        (i for i, b in enumerate(bags) if root_clique <= b),
        key=lambda i: (len(bags[i]), sorted(bags[i])),
        default=None,
    )
    if host is None:
        raise DecompositionError("root clique is not a clique of the graph")
    table = dict(enumerate(bags))
    r = len(bags)
    table[r] = root_clique
    return make_nice(table, edges + [(r, host)], r)


def nice_decomposition(g: Graph, root_clique: Iterable[int]) -> NiceDecomposition:
    root_clique = frozenset(root_clique)
    adj = g.as_dict()
    check = four_chordal_witness(adj)
    if not check:
        raise DecompositionError(f"graph is not 4-chordal: {check}")
    cliques = chordal_cliques(adj)
    triangles = [c for c in cliques if len(c) == 3]
    if triangles:
        if root_clique not in triangles:
            raise DecompositionError("root must be a maximal 3-clique when one exists")
    else:
        if len(root_clique) < 4:
            raise DecompositionError("root must be a clique of order at least four")
        if any(v not in adj[u] for u in root_clique for v in root_clique if u != v):
            raise DecompositionError("root is not a clique")
    if any(len(adj[v]) == 0 for v in adj) or len(components_of(adj)) > 1:
        raise DecompositionError("nice decompositions are built per connected component")
    d = nice_from_adj(adj, root_clique)
    largest = max(len(b) for b in d.bags)
    if d.steps > 4 * g.n * largest * largest:
        raise DecompositionError("subdivision did not terminate within the step cap")
    return d


def validate_nice(d: TreeDecomposition, g: Graph) -> list[str]:
    problems = []
    m = len(d.bags)
    roots = [x for x, p in enumerate(d.parent) if p is None]
    if roots != [d.root]:
        problems.append(f"expected single root {d.root}, found {roots}")
        return problems
    for x in range(m):
        seen = set()
        y = x
        while y is not None:
            if y in seen:
                problems.append(f"cycle through node {x}")
                return problems
            seen.add(y)
            y = d.parent[y]
    for x, bag in enumerate(d.bags):
        for u in bag:
            if not 0 <= u < g.n:
                problems.append(f"node {x}: vertex {u} out of range")
                return problems
        for u in bag:
            for v in bag:
                if u < v and not g.has_edge(u, v):
                    problems.append(f"node {x}: bag is not a clique ({u},{v} missing)")
    for u, v in g.edges():
        if not any(u in b and v in b for b in d.bags):
            problems.append(f"edge ({u},{v}) not covered by any bag")
    for v in range(g.n):
        holders = {x for x, b in enumerate(d.bags) if v in b}
        if not holders:
            continue
        tops = [x for x in holders if d.parent[x] not in holders]
        if len(tops) != 1:
            problems.append(f"bags containing vertex {v} do not induce a subtree")
    try:
        cliques = set(chordal_cliques(g.as_dict()))
    except ValueError:
        problems.append("graph is not chordal")
        return problems
    for x, p in enumerate(d.parent):
        bag = d.bags[x]
        if p is not None and d.bags[p] == bag:
            problems.append(f"adjacent duplicate bags at nodes {p} and {x}")
        if len(bag) < 3:
            problems.append(f"node {x}: bag of size {len(bag)} < 3")
        if len(bag) == 3 and bag not in cliques:
            problems.append(f"node {x}: 3-bag is not a maximal clique")
        if p is not None and len(bag) >= 5 and len(bag & d.bags[p]) != len(bag) - 1:
            problems.append(
                f"node {x}: bag of size {len(bag)} shares {len(bag & d.bags[p])} "
                f"vertices with parent, needs k-1 sharing"
            )
    root_bag = d.bags[d.root]
    if any(len(c) == 3 for c in cliques) and not (len(root_bag) == 3 and root_bag in cliques):
        problems.append("root is not a maximal 3-clique although one exists")
    return problems


def find_branches(d: TreeDecomposition) -> list[Branch]:
    kids = d.children()
    order = _preorder(d, kids)
    has_three = [False] * len(d.bags)
    for x in reversed(order):
        has_three[x] = len(d.bags[x]) == 3 or any(has_three[c] for c in kids[x])
    found = []
    stack = [d.root]
    while stack:
        x = stack.pop()
        p = d.parent[x]
        bag = d.bags[x]
        if (
            p is not None
            and len(bag) == 4
            and len(bag & d.bags[p]) == 2
            and not has_three[x]
        ):
            a, b = sorted(bag & d.bags[p])
            nodes = []
            sub = [x]
            while sub:
                y = sub.pop()
                nodes.append(y)
                sub.extend(kids[y])
            found.append(Branch(x, a, b, frozenset(nodes)))
            continue
        stack.extend(reversed(kids[x]))
    return sorted(found, key=lambda br: br.root_node)


def _preorder(d, kids):
    order = []
    stack = [d.root]
    while stack:
        x = stack.pop()
        order.append(x)
        stack.extend(reversed(kids[x]))
    return order
