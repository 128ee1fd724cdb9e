"""Drivers: per-component dispatch, the triangle case and the triangle-free reductions."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations

from ..decomp import clique_tree, find_branches, make_nice, nice_from_adj
from ..graph import Graph, chordal_cliques, components_of, four_chordal_witness
from ..oracle import is_transversal
from .branch import process_branch
from .ledger import BoundMiss, EngineError, Ledger
from .rules import Work, process_node

MODES = ("auto", "thmA", "thmB", "basic")


def bound(n: int) -> int:
    if n < 1:
        raise ValueError("bound needs n >= 1")
    return 2 * (n - 1) // 7


class NotFourChordal(ValueError):
    def __init__(self, witness):
        super().__init__(f"graph is not 4-chordal: {witness}")
        self.witness = witness


@dataclass(frozen=True)
class TransversalResult:
    red: frozenset[int]
    saved: int
    trace: tuple[dict, ...]
    bound_ok: bool
    n: int = 0
    t: int = 0

    @property
    def size(self) -> int:
        return len(self.red)


def solve(g: Graph, mode: str = "auto") -> TransversalResult:
    """A clique transversal of the 4-chordal graph ``g`` with its zloty trace."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    adj = g.as_dict()
    check = four_chordal_witness(adj)
    if not check:
        raise NotFourChordal(check)
    t = sum(1 for c in chordal_cliques(adj) if len(c) == 3)
    L = Ledger(range(g.n))
    for comp in components_of(adj):
        _component(L, {v: adj[v] for v in comp}, mode, f"c{comp[0]}")
    leftover = [v for v in range(g.n) if v not in L.gone]
    if leftover or L.tuples or L.debt:
        raise EngineError(
            f"unfinished state: live {leftover[:5]}, tuples {len(L.tuples)}, debt {L.debt}",
            L.events,
        )
    missed = is_transversal(g, L.red)
    if missed is not None:
        raise EngineError(f"red set misses clique {sorted(missed)}", L.events)
    if 7 * len(L.red) != 2 * g.n + t - L.saved:
        raise EngineError("accounting identity fails", L.events)
    ok = g.n >= 1 and len(L.red) <= bound(max(g.n, 1))
    if not ok and g.n >= 5 and mode != "basic":
        raise BoundMiss(f"{len(L.red)} red vertices exceed bound {bound(g.n)} for n={g.n}",
                        L.events)
    return TransversalResult(frozenset(L.red), L.saved, tuple(L.events), ok, g.n, t)


def _single(g: Graph, want_t: bool, mode: str) -> TransversalResult:
    comps = components_of(g.as_dict())
    if len(comps) != 1:
        raise ValueError(f"graph has {len(comps)} components, expected one")
    t = sum(1 for c in chordal_cliques(g.as_dict()) if len(c) == 3)
    if bool(t) != want_t:
        raise ValueError(f"graph has t={t} maximal 3-cliques")
    return solve(g, mode)


def solve_with_triangle(g: Graph) -> TransversalResult:
    """Branch-saving driver for a connected graph with a maximal 3-clique."""
    if g.n < 5:
        raise ValueError("the triangle driver needs at least five vertices")
    return _single(g, True, "thmA")


def solve_without_triangle(g: Graph) -> TransversalResult:
    """Reduction driver for a connected graph without maximal 3-cliques."""
    if g.n < 4:
        raise ValueError("the triangle-free driver needs at least four vertices")
    return _single(g, False, "thmB")


def _component(L: Ledger, adj: dict, mode: str, tag: str) -> None:
    if len(adj) == 1:
        (v,) = adj
        L.step("teardown", vertex=v).vertex(v).commit(reason="isolated vertex")
        return
    cliques = chordal_cliques(adj)
    t = sum(1 for c in cliques if len(c) == 3)
    if mode == "basic":
        _basic(L, adj, cliques, tag)
    elif t and mode in ("auto", "thmA"):
        theorem_a(L, adj, cliques, tag)
    elif not t and mode in ("auto", "thmB"):
        theorem_b(L, adj, tag)
    else:
        raise ValueError(f"mode {mode} does not apply to a component with t={t}")


def _fund_triangles(L, W, d):
    for x, bag in enumerate(d.bags):
        if len(bag) == 3:
            L.add_node_fund(W.label(x), bag)


def _basic(L, adj, cliques, tag):
    tri = [c for c in cliques if len(c) == 3]
    root = min(tri or cliques, key=sorted)
    d = nice_from_adj(adj, root)
    W = Work.from_decomposition(d, tag)
    _fund_triangles(L, W, d)
    for x in W.postorder(W.root()):
        process_node(L, W, x)


def theorem_a(L: Ledger, adj: dict, cliques, tag: str) -> None:
    """Process a connected graph with t >= 1, saving one zloty per branch."""
    tri = [c for c in cliques if len(c) == 3]
    d = nice_from_adj(adj, min(tri, key=sorted))
    W = Work.from_decomposition(d, tag)
    _fund_triangles(L, W, d)
    branches = find_branches(d)
    if len(branches) < len(tri) + 2:
        raise EngineError(f"only {len(branches)} branches for t={len(tri)}", L.events)
    starts = {b.root_node: b for b in branches}
    stack = [(W.root(), False)]
    while stack:
        x, expanded = stack.pop()
        if x in starts:
            b = starts[x]
            process_branch(L, W, x, b.alpha, b.beta)
        elif expanded:
            process_node(L, W, x)
        else:
            stack.append((x, True))
            stack.extend((c, False) for c in sorted(W.children[x], reverse=True))


# --- the triangle-free case


class _Tree:
    """A clique tree as an undirected adjacency, rooted at a node of maximum degree."""

    def __init__(self, bags: dict, edges):
        self.bags = dict(bags)
        self.nbrs = {x: set() for x in self.bags}
        for a, b in edges:
            self.nbrs[a].add(b)
            self.nbrs[b].add(a)
        self.root = min(self.bags, key=lambda x: (-len(self.nbrs[x]), x))
        self.orient()

    def edges(self):
        return [(a, b) for a in self.nbrs for b in self.nbrs[a] if a < b]

    def orient(self):
        self.parent = {self.root: None}
        self.depth = {self.root: 0}
        queue = deque([self.root])
        while queue:
            a = queue.popleft()
            for b in sorted(self.nbrs[a]):
                if b not in self.parent:
                    self.parent[b] = a
                    self.depth[b] = self.depth[a] + 1
                    queue.append(b)
        self.children = {x: sorted(b for b in self.nbrs[x] if self.parent.get(b) == x)
                         for x in self.bags}

    def is_leaf(self, x):
        return x != self.root and not self.children[x]

    def nice(self, root=None, extra=None):
        bags = dict(self.bags)
        edges = self.edges()
        if extra is not None:
            bags, edges = extra
        return make_nice(bags, edges, self.root if root is None else root)


def _finish(L, vertices, colors, reason, **info):
    """Color ``colors`` and remove every other live vertex in one step."""
    s = L.step("endgame", **info)
    for c in colors:
        s.vertex(c).end_all(c).color(c)
    for v in sorted(vertices):
        if v not in L.gone and v not in colors:
            s.vertex(v)
    return s.commit(reason=reason)


def _live(L, adj):
    return sorted(v for v in adj if v not in L.gone)


def _adj_from_bags(bags) -> dict:
    adj: dict[int, set[int]] = {}
    for bag in bags:
        for u in bag:
            adj.setdefault(u, set()).update(bag - {u})
    return adj


def theorem_b(L: Ledger, adj: dict, tag: str) -> None:
    """Process a connected graph without maximal 3-cliques, saving at least two zlotys."""
    adj = {v: set(ns) for v, ns in adj.items()}
    tree = None
    rounds = 0
    while True:
        rounds += 1
        if rounds > 10 * (len(adj) + 1) ** 2:
            raise EngineError("triangle-free reductions do not terminate", L.events)
        if tree is None:
            comps = components_of(adj)
            if len(comps) > 1:
                for comp in comps:
                    _component(L, {v: adj[v] for v in comp}, "auto", f"{tag}.{comp[0]}")
                return
            bags, edges = clique_tree(adj)
            if any(len(b) == 3 for b in bags):
                raise EngineError("a reduction produced a maximal 3-clique", L.events)
            tree = _Tree(dict(enumerate(bags)), edges)
        T = tree
        if len(T.bags) <= 2:
            common = frozenset.intersection(*T.bags.values())
            _finish(L, adj, [min(common)], "at most two maximal cliques", case="a")
            return
        leaves = [x for x in sorted(T.bags) if T.is_leaf(x)]

        # (b) large leaves
        big = next((x for x in leaves if len(T.bags[x]) >= 5), None)
        if big is not None:
            U1, U = T.bags[big], T.bags[T.parent[big]]
            priv = sorted(U1 - U)
            if len(priv) >= 2:
                v = priv[0]
                L.step("reduction", case="b", vertex=v).vertex(v).commit(
                    reason="private vertex of a large leaf deleted")
                for u in adj.pop(v):
                    adj[u].discard(v)
            else:
                v, w = priv[0], min(U1 & U)
                L.mark("reduction", case="b", edge=[v, w], saved=0)
                adj[v].discard(w)
                adj[w].discard(v)
            tree = None
            continue

        # (c) a leaf with at least two private vertices
        wide = next((x for x in leaves if len(T.bags[x] - T.bags[T.parent[x]]) >= 2), None)
        if wide is not None:
            _leaf_with_two_private(L, adj, T, wide, tag)
            return

        # (d) a node whose only child is a leaf
        lone = next((x for x in sorted(T.bags) if x != T.root and len(T.children[x]) == 1
                     and T.is_leaf(T.children[x][0])), None)
        if lone is not None:
            (u,) = T.children[lone]
            up = T.parent[lone]
            U, U1, U2 = T.bags[u], T.bags[lone], T.bags[up]
            if U1 & U2 == U & U1:
                T.nbrs[u].discard(lone)
                T.nbrs[lone].discard(u)
                T.nbrs[u].add(up)
                T.nbrs[up].add(u)
                L.mark("reduction", case="d-move", node=u, saved=0)
                T.orient()
                continue
            if len(U1) > 4:
                if U1 & U2 < U & U1:
                    v = min((U & U1) - U2)
                else:
                    v = min((U1 & U2) - U)
                bags = dict(T.bags)
                bags[lone] = U1 - {v}
                L.mark("reduction", case="d-shrink", vertex=v, saved=0)
                new = _adj_from_bags(bags.values())
                for x in adj:
                    adj[x] = new.get(x, set())
                tree = None
                continue
            _auxiliary(L, adj, T, u, lone, up, tag)
            return

        # (e) two leaf children whose bags do not share exactly two vertices
        fathers = [x for x in sorted(T.bags)
                   if sum(1 for c in T.children[x] if T.is_leaf(c)) >= 2]
        for x in fathers:
            kids = [c for c in T.children[x] if T.is_leaf(c)]
            odd = next(((a, b) for a, b in combinations(kids, 2)
                        if len(T.bags[a] & T.bags[b]) != 2), None)
            if odd is not None:
                _two_leaves(L, adj, T, x, *odd, tag)
                return

        # (f) structural endgames
        if len(fathers) >= 2:
            d = T.nice()
            W = Work.from_decomposition(d, f"{tag}.f1")
            for x in fathers[:2]:
                a, b = [c for c in T.children[x] if T.is_leaf(c)][:2]
                _leaf_pair(L, W, d, a, b, "f1")
            _basic_rest(L, W)
            return
        root_kids = T.children[T.root]
        if any(not T.is_leaf(c) for c in root_kids):
            _root_with_inner_child(L, adj, T, tag)
            return
        common = frozenset.intersection(*T.bags.values())
        if common:
            _finish(L, adj, [min(common)], "a vertex lies in every clique", case="f3")
            return
        if len(root_kids) >= 4:
            d = T.nice()
            W = Work.from_decomposition(d, f"{tag}.f3")
            _leaf_pair(L, W, d, root_kids[0], root_kids[1], "f3")
            _leaf_pair(L, W, d, root_kids[2], root_kids[3], "f3")
            _basic_rest(L, W)
            return
        raise EngineError("no triangle-free case applies", L.events)


def _node_of(d, origin):
    return d.origin.index(origin)


def _leaf_pair(L, W, d, a, b, case):
    """Delete the private vertices of two sibling leaves and pair their common vertices."""
    xa, xb = _node_of(d, a), _node_of(d, b)
    va = min(W.private(xa))
    vb = min(W.private(xb))
    shared = d.bags[xa] & d.bags[xb]
    s = L.step("surgery", rule=case, node=W.label(xa), bag=sorted(d.bags[xa] | d.bags[xb]))
    s.vertex(va).vertex(vb).new_tuple(shared)
    s.commit(reason="two sibling leaves replaced by a pair")
    W.remove(xa)
    W.remove(xb)


def _basic_rest(L, W, skip=()):
    for x in W.postorder(W.root()):
        if x not in skip:
            process_node(L, W, x)


def _leaf_with_two_private(L, adj, T, leaf, tag):
    U = T.bags[T.parent[leaf]]
    U1 = T.bags[leaf]
    k = len(U1 - U)
    d = T.nice(root=leaf)
    W = Work.from_decomposition(d, f"{tag}.c")
    (child,) = W.children[0]
    shared = d.bags[child] & d.bags[0]
    if k == 2:
        a, b = sorted(shared)
    elif k == 3:
        (a,) = shared
        b = min(d.bags[child] - {a})
    else:
        raise EngineError(f"leaf with {k} private vertices in a connected graph", L.events)
    process_branch(L, W, child, a, b)
    live = _live(L, adj)
    if k == 2:
        if a in L.red or b in L.red:
            _finish(L, live, [], "leaf clique already hit", case="c2")
        else:
            _finish(L, live, [a], "shared vertex of the leaf colored", case="c2")
    else:
        if a in L.red:
            _finish(L, live, [], "leaf clique already hit", case="c3")
        else:
            _finish(L, live, [a], "shared vertex of the leaf colored", case="c3")
    W.remove(0)


def _auxiliary(L, adj, T, u, mid, up, tag):
    U, U1, U2 = T.bags[u], T.bags[mid], T.bags[up]
    shared = U & U1
    (v5,) = U1 - U
    v2 = min(shared - U2)
    v3, v4 = sorted(shared - {v2})
    X = set(U2 & {v3, v4})
    pad = sorted(U2 - X, key=lambda z: (z != v5, z))
    X.update(pad[: 2 - len(X)])
    w1 = L.limit
    w2 = L.limit + 1
    L.limit += 2
    bags = {x: b for x, b in T.bags.items() if x not in (u, mid)}
    edges = [(a, b) for a, b in T.edges() if a not in (u, mid) and b not in (u, mid)]
    s = max(T.bags) + 1
    bags[s] = frozenset(X | {w1, w2})
    edges.append((s, up))
    d = make_nice(bags, edges, s)
    W = Work.from_decomposition(d, f"{tag}.h")
    (child,) = W.children[0]
    a, b = sorted(X)
    L.mark("reduction", case="d-aux", alpha=a, beta=b, phantom=[w1, w2], saved=0)
    process_branch(L, W, child, a, b)
    live = _live(L, adj)
    colors = []
    pref = {v3: 0, v4: 1, v5: 2}
    for t in sorted(L.tuples.values(), key=lambda t: t.id):
        if not (t.members & set(colors)):
            colors.append(min(t.members, key=lambda z: (pref.get(z, 3), z)))
    if not ({v3, v4} & (L.red | set(colors))):
        colors.append(v3)
    _finish(L, live, colors, "leaf pair resolved after the auxiliary branch", case="d")


def _normalize(L, pool):
    """Color overloaded vertices and merge triples sharing two vertices."""
    while True:
        hit = None
        for v in sorted(pool):
            if v in L.gone or v in L.red:
                continue
            ts = L.tuples_of(v)
            triples = sum(1 for t in ts if len(t.members) == 3)
            pairs = len(ts) - triples
            if triples >= 3 or (pairs and len(ts) >= 2):
                hit = v
                break
        if hit is None:
            break
        L.step("endgame", case="e", vertex=hit).vertex(hit, remove=False).end_all(hit) \
            .color(hit).commit(reason="overloaded vertex colored")
    while True:
        triples = sorted((t for t in L.tuples.values() if len(t.members) == 3), key=lambda t: t.id)
        merge = next(((p, q) for p, q in combinations(triples, 2)
                      if len(p.members & q.members) >= 2), None)
        if merge is None:
            break
        p, q = merge
        keep = sorted(p.members & q.members)[:2]
        L.step("endgame", case="e").end(p.id).end(q.id).new_tuple(keep, (p.id, q.id)) \
            .commit(reason="triples merged into a pair")


def _min_hitting(L, sets, pool):
    cand = sorted(v for v in pool if v not in L.gone and v not in L.red)
    need = [s for s in sets if not (s & L.red)]
    for size in range(len(cand) + 1):
        for pick in combinations(cand, size):
            if all(s & set(pick) for s in need):
                return list(pick)
    raise EngineError("no hitting set for the two-leaf endgame", L.events)


def _two_leaves(L, adj, T, x, a, b, tag):
    U, U1, U2 = T.bags[x], T.bags[a], T.bags[b]
    k = len(U1 & U2)
    if k == 3:
        d = T.nice()
        W = Work.from_decomposition(d, f"{tag}.e")
        xa, xb = _node_of(d, a), _node_of(d, b)
        s = L.step("surgery", rule="e3", node=W.label(xa), bag=sorted(U1 | U2))
        s.vertex(min(U1 - U)).vertex(min(U2 - U)).new_tuple(U1 & U2)
        s.commit(reason="two leaves on one triple")
        W.remove(xa)
        W.remove(xb)
        _basic_rest(L, W)
        return
    A, B = U & U1, U & U2
    w = max(T.bags) + 1
    bags = dict(T.bags)
    bags[w] = A | B
    edges = [(p, q) for p, q in T.edges() if {p, q} not in ({x, a}, {x, b})]
    edges += [(x, w), (w, a), (w, b)]
    d = make_nice(bags, edges, w)
    W = Work.from_decomposition(d, f"{tag}.e")
    xa, xb = _node_of(d, a), _node_of(d, b)
    for c in sorted(W.children[0]):
        if c not in (xa, xb):
            for y in W.postorder(c):
                process_node(L, W, y)
    pool = A | B
    _normalize(L, pool)
    live_tuples = [t.members for t in L.tuples.values()]
    colors = _min_hitting(L, [A, B] + live_tuples, pool)
    _finish(L, _live(L, adj), colors, f"two leaves sharing {k} vertices", case="e")


def _root_with_inner_child(L, adj, T, tag):
    r = T.root
    kids = T.children[r]
    leaf = next(c for c in kids if T.is_leaf(c))
    R, W1 = T.bags[r], T.bags[leaf]
    w5 = min(R - W1)
    top = frozenset((W1 & R) | {w5})
    inner = [x for x in T.bags if not T.is_leaf(x) and x != r] or [r]
    u = max(inner, key=lambda x: (T.depth[x], -x))
    a, b = [c for c in T.children[u] if T.is_leaf(c)][:2]
    u0 = max(T.bags) + 1
    bags = dict(T.bags)
    bags[u0] = top
    edges = [(p, q) for p, q in T.edges() if {p, q} != {r, leaf}] + [(u0, r), (u0, leaf)]
    d = make_nice(bags, edges, u0)
    W = Work.from_decomposition(d, f"{tag}.f2")
    _leaf_pair(L, W, d, a, b, "f2")
    xl = _node_of(d, leaf)
    for c in sorted(W.children[0]):
        if c != xl:
            for y in W.postorder(c):
                process_node(L, W, y)
    process_node(L, W, xl)
    process_node(L, W, 0)
