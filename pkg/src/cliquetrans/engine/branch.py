"""Branch processing that saves at least one zloty per branch.

A branch is consumed leaf-first along a chosen path u0, ..., ul = r.  When the
basic order saves nothing, the last bad rule that destroyed a triple on the
path (B2 or B3 at node u_k) is replaced by a more economical step, and the
rest of the path is watched so the borrowed zloty is repaid.
"""

from __future__ import annotations

from .ledger import EngineError, Ledger
from .rules import Work, apply_rule, process_node, select_rule


class SurgeryFailed(Exception):
    pass


def process_branch(L: Ledger, W: Work, root: int, alpha: int, beta: int,
                   keep=frozenset()) -> int:
    """Consume the subtree of ``W`` at ``root``; return the zlotys it saved.

    ``alpha`` and ``beta`` are the root's vertices shared with the outside;
    ``keep`` lists further vertices that must survive the branch.
    """
    keep = frozenset(keep) | {alpha, beta}
    L.mark("branch_begin", node=W.label(root), alpha=alpha, beta=beta)
    base = L.saved
    nodes = W.postorder(root)
    leaves = [x for x in nodes if not W.children[x]]
    failures = []
    for leaf in leaves:
        for prefer in (0, 1):
            L2, W2 = L.clone(), W.clone()
            try:
                _attempt(L2, W2, root, leaf, alpha, beta, keep, prefer)
            except (SurgeryFailed, EngineError) as exc:
                failures.append(f"leaf {leaf}/{prefer}: {exc}")
                continue
            if L2.saved - base >= 1 and L2.debt == 0:
                L.adopt(L2)
                W.adopt(W2)
                L.mark("branch_end", node=W.label(root), saved=L.saved - base)
                return L.saved - base
            failures.append(f"leaf {leaf}/{prefer}: saved {L2.saved - base}, debt {L2.debt}")
    raise EngineError(
        f"branch at {W.label(root)} saved nothing: " + "; ".join(failures[:6]), L.events
    )


def _attempt(L, W, root, u0, alpha, beta, keep, prefer):
    def keep_at(x):
        return keep if x == root else frozenset()

    path = [u0]
    while path[-1] != root:
        path.append(W.parent[path[-1]])
    on_path = set(path)
    others = [x for x in W.postorder(root) if x not in on_path]
    base = L.saved

    process_node(L, W, u0, keep_at(u0))
    if L.saved > base or len(path) == 1:
        for x in others + path[1:]:
            process_node(L, W, x, keep_at(x))
        return

    # dry run of the basic order, recording which path bags held a live triple
    L_sim, W_sim = L.clone(), W.clone()
    for x in others:
        process_node(L_sim, W_sim, x)
    had_triple = {}
    for j in range(1, len(path)):
        bag = W_sim.bags[path[j]]
        had_triple[j] = any(len(t.members) == 3 and t.members <= bag
                            for t in L_sim.tuples.values())
        process_node(L_sim, W_sim, path[j], keep_at(path[j]))
    if L_sim.saved > base:
        L.adopt(L_sim)
        W.adopt(W_sim)
        return
    ks = [j for j, f in had_triple.items() if f]
    if not ks:
        raise SurgeryFailed("no triple survives to a path node")
    k = max(ks)

    for x in others:
        process_node(L, W, x)
    for j in range(1, k):
        process_node(L, W, path[j])
    # the order of private vertices at u_k is free; try the default one first
    firsts = [None] + sorted(W.private(path[k], keep_at(path[k])))
    errors = []
    for first in firsts:
        L2, W2 = L.clone(), W.clone()
        try:
            _finish_path(L2, W2, path, k, alpha, beta, keep, prefer, keep_at, first)
        except (SurgeryFailed, EngineError) as exc:
            errors.append(str(exc))
            continue
        L.adopt(L2)
        W.adopt(W2)
        return
    raise SurgeryFailed(errors[0])


def _finish_path(L, W, path, k, alpha, beta, keep, prefer, keep_at, first):
    surgery = _Surgery(path, k, alpha, beta, keep, prefer)
    process_node(L, W, path[k], keep_at(path[k]), surgery.at_uk, first)
    if not surgery.fired:
        raise SurgeryFailed(f"neither B2 nor B3 fired at u_{k}")
    for j in range(k + 1, len(path)):
        surgery.before_node(L, W, j)
        process_node(L, W, path[j], keep_at(path[j]), surgery.hook)
    if L.debt:
        raise SurgeryFailed("debt not repaid along the path")


class _Surgery:
    def __init__(self, path, k, alpha, beta, keep, prefer):
        self.path = path
        self.keep = keep
        self.k = k
        self.alpha = alpha
        self.beta = beta
        self.prefer = prefer
        self.fired = False
        self.mode = "done"
        self.quad: list[int] = []
        # root pair created for the quad; bags holding it are already covered
        self.pair = None
        self.y = self.y_partner = None
        # node whose bag lies inside the clique of u_k, which is already hit
        self.covered = None

    # --- u_k: replace the bad rule

    def at_uk(self, L: Ledger, W: Work, x: int, v: int) -> bool:
        if self.fired:
            return False
        rule = select_rule(L.red, L.tuples_of, v, W.bags[x])
        if rule == "B2":
            self._b2(L, W, x, v)
        elif rule == "B3":
            self._b3(L, W, x, v)
        else:
            return False
        self.fired = True
        return True

    def _b2(self, L, W, x, v):
        label = W.label(x)
        ts = L.tuples_of(v)
        pair = next(t for t in ts if len(t.members) == 2)
        triple = next(t for t in ts if len(t.members) == 3)
        (v2,) = pair.members - {v}
        v1, v1b = sorted(triple.members - {v})
        s = L.step("surgery", rule="B2", vertex=v, node=label, bag=sorted(W.bags[x]))
        if v2 in (v1, v1b):
            s.vertex(v).vertex(v2, remove=False).end_all(v).end_all(v2).color(v2)
            s.commit(reason="pair and triple share a vertex")
            return
        if any(t.id != pair.id for t in L.tuples_of(v2)):
            s.end(triple.id).vertex(v).vertex(v2, remove=False).end_all(v2)
            s.color(v2).new_tuple({v1, v1b}, (triple.id,))
            s.commit(reason="partner in another pair")
            return
        if v2 not in (self.alpha, self.beta):
            raise SurgeryFailed(f"B2 partner {v2} is unmatched but not a root vertex")
        other = self.beta if v2 == self.alpha else self.alpha
        choice = None
        for c in (v1, v1b):
            if c == other:
                continue
            partners = [w for t in L.tuples_of(c) if len(t.members) == 2
                        for w in t.members - {c}]
            if partners and other not in partners:
                choice = c
                break
        if choice is None:
            raise SurgeryFailed("no triple vertex with a usable partner")
        s.vertex(v).vertex(choice, remove=False).vertex(v2, remove=False)
        s.end_all(v).end_all(choice).end_all(v2).color(choice).color(v2)
        s.commit(reason="partner is a root vertex")

    def _b3(self, L, W, x, v):
        label = W.label(x)
        t1, t2 = [t for t in L.tuples_of(v) if len(t.members) == 3]
        shared = (t1.members & t2.members) - {v}
        s = L.step("surgery", rule="B3", vertex=v, node=label, bag=sorted(W.bags[x]))
        if shared:
            w = min(shared)
            s.vertex(v).vertex(w, remove=False).end_all(v).end_all(w).color(w)
            s.commit(reason="triples share a second vertex")
            return
        s.end(t1.id).end(t2.id).vertex(v).color(v)
        s.commit(allow_debt=True, reason="colored on six zlotys")
        self.quad = sorted((t1.members | t2.members) - {v})
        self.mode = "quad"

    # --- u_{k+1} .. u_l

    def before_node(self, L: Ledger, W: Work, j: int) -> None:
        if self.mode != "quad":
            return
        q = set(self.quad)
        x = self.path[j]
        bag = W.bags[x]
        if not q <= bag:
            raise SurgeryFailed("quad left the path")
        if j + 1 < len(self.path) and q <= W.bags[self.path[j + 1]]:
            return
        priv = W.private(x, self.keep)
        xs = sorted(q & priv)
        if not xs:
            raise SurgeryFailed("no quad vertex is private at its top node")
        x1 = xs[0]
        label = W.label(x)
        if any(u in L.red for u in bag):
            self.mode = "done"
            return
        s = L.step("surgery", rule="quad", vertex=x1, node=label, bag=sorted(bag))
        if bag == q:
            s.vertex(x1).commit(reason="quad bag is not maximal")
            self.covered = x
            self.mode = "done"
            return
        ab = (self.alpha, self.beta)
        ys = sorted((u for u in bag - q if u not in L.gone),
                    key=lambda u: ((u in ab) == bool(self.prefer), u))
        ys = [u for u in ys if u in ab or any(len(t.members) == 2 for t in L.tuples_of(u))]
        if not ys:
            raise SurgeryFailed("no usable vertex beside the quad")
        y = ys[0]
        rest = [u for u in self.quad if u != x1]
        if y in (self.alpha, self.beta):
            other = self.beta if y == self.alpha else self.alpha
            if other not in q:
                s.vertex(y, remove=False).end_all(y).vertex(x1)
                for u in rest:
                    s.vertex(u, remove=False)
                s.color(y).commit(reason="root vertex colored for the quad")
                self.mode = "done"
                return
            s.vertex(x1)
            for u in rest:
                if u != other:
                    s.vertex(u, remove=False)
            s.new_tuple({self.alpha, self.beta}).commit(reason="root pair for the quad")
            self.pair = frozenset(ab)
            self.mode = "done"
            return
        pairs = [t for t in L.tuples_of(y) if len(t.members) == 2]
        if not pairs:
            raise SurgeryFailed(f"quad partner {y} is unmatched")
        (yb,) = pairs[0].members - {y}
        s.vertex(y, remove=False).end_all(y).vertex(x1).color(y)
        s.commit(reason="quad neighbour colored through its pair")
        self.y, self.y_partner = y, yb
        self.quad = rest
        self.mode = "await"

    def hook(self, L: Ledger, W: Work, x: int, v: int) -> bool:
        if x == self.covered and not L.in_tuple(v) and v not in L.red:
            L.step("surgery", rule="covered", vertex=v, node=W.label(x),
                   bag=sorted(W.bags[x])).vertex(v).commit(reason="clique already hit")
            return True
        if (self.pair is not None and self.pair <= W.bags[x] and not L.in_tuple(v)
                and v not in L.red
                and any(t.members == self.pair for t in L.tuples.values())):
            L.step("surgery", rule="covered", vertex=v, node=W.label(x),
                   bag=sorted(W.bags[x])).vertex(v).commit(reason="bag holds the root pair")
            return True
        if self.mode not in ("quad", "await"):
            return False
        if v in self.quad:
            self.mode = "done"
            return False
        if self.mode != "await":
            return False
        if v == self.y:
            apply_rule(L, W.label(x), v, W.bags[x], "B1")
            yb = self.y_partner
            if yb in L.gone or yb in L.red:
                raise SurgeryFailed("quad partner vanished")
            self.quad = sorted(self.quad + [yb])
            self.mode = "quad"
            return True
        return False
