"""The basic algorithm: rule selection and leaf processing."""

from __future__ import annotations

from typing import Callable, Iterable

from .ledger import EngineError, Ledger

BIG_RULES = ("B1", "G1", "G2", "B2", "B3", "G3", "G4", "B4", "G5", "B5")
TRI_RULES = ("T1", "T2", "T3", "T4", "T5")
GOOD_RULES = frozenset({"G1", "G2", "G3", "G4", "G5"})


class Work:
    """The live part of a rooted decomposition being consumed leaf by leaf."""

    def __init__(self, bags: dict, parent: dict, tag: str):
        self.bags = dict(bags)
        self.parent = dict(parent)
        self.children: dict[int, set[int]] = {x: set() for x in self.bags}
        for x, p in self.parent.items():
            if p is not None:
                self.children[p].add(x)
        self.tag = tag

    @classmethod
    def from_decomposition(cls, d, tag: str) -> "Work":
        return cls(dict(enumerate(d.bags)), dict(enumerate(d.parent)), tag)

    def clone(self) -> "Work":
        c = Work.__new__(Work)
        c.bags = dict(self.bags)
        c.parent = dict(self.parent)
        c.children = {x: set(s) for x, s in self.children.items()}
        c.tag = self.tag
        return c

    def adopt(self, other: "Work") -> None:
        self.__dict__.update(other.__dict__)

    def label(self, x: int) -> str:
        return f"{self.tag}.{x}"

    def private(self, x: int, keep: Iterable[int] = ()) -> frozenset[int]:
        p = self.parent[x]
        base = self.bags[x] if p is None else self.bags[x] - self.bags[p]
        return base - frozenset(keep)

    def remove(self, x: int) -> None:
        if self.children[x]:
            raise EngineError(f"node {self.label(x)} removed before its children")
        p = self.parent.pop(x)
        if p is not None:
            self.children[p].discard(x)
        del self.bags[x], self.children[x]

    def postorder(self, top: int) -> list[int]:
        out = []
        stack = [(top, False)]
        while stack:
            x, done = stack.pop()
            if done:
                out.append(x)
                continue
            stack.append((x, True))
            for c in sorted(self.children[x], reverse=True):
                stack.append((c, False))
        return out

    def root(self) -> int:
        return next(x for x, p in self.parent.items() if p is None)


def select_rule(red, tuples_of: Callable, v: int, bag) -> str:
    """First rule whose guard holds for private vertex ``v`` of ``bag``."""
    ts = tuples_of(v)
    pairs = [t for t in ts if len(t.members) == 2]
    triples = [t for t in ts if len(t.members) == 3]
    others_red = any(u in red for u in bag if u != v)
    if len(bag) >= 4:
        if v in red:
            return "B1"
        if len(ts) >= 3:
            return "G1"
        if len(pairs) >= 2:
            return "G2"
        if pairs and triples:
            return "B2"
        if len(triples) >= 2:
            return "B3"
        if triples:
            return "G3"
        if pairs:
            (w,) = pairs[0].members - {v}
            if any(t.id != pairs[0].id for t in tuples_of(w)):
                return "G4"
            return "B4"
        return "G5" if others_red else "B5"
    if v in red:
        return "T1"
    if len(ts) >= 2:
        return "T2"
    if len(ts) == 1:
        return "T3"
    return "T4" if others_red else "T5"


def b5_triple(L: Ledger, v: int, bag) -> list[int]:
    cand = sorted(
        (u for u in bag if u != v and u not in L.gone and u not in L.red),
        key=lambda u: (L.in_tuple(u), u),
    )
    if len(cand) < 3:
        raise EngineError(f"rule B5 at vertex {v}: fewer than three live vertices in {sorted(bag)}",
                          L.events)
    return sorted(cand[:3])


def apply_rule(L: Ledger, label: str, v: int, bag, rule: str) -> int:
    s = L.step("rule", rule=rule, vertex=v, node=label, bag=sorted(bag))
    ts = L.tuples_of(v)
    if rule in ("B1", "T1", "G5"):
        s.vertex(v)
    elif rule in ("G1", "G2", "B2", "T2"):
        s.vertex(v).end_all(v)
        if rule == "T2":
            s.node(label)
        s.color(v)
    elif rule in ("B3", "G3"):
        for t in ts:
            s.end(t.id)
        s.vertex(v)
        for t in ts:
            s.new_tuple(t.members - {v}, (t.id,))
    elif rule in ("G4", "B4", "T3"):
        (t,) = ts
        w = min(t.members - {v})
        s.vertex(v).vertex(w, remove=False).end_all(v).end_all(w)
        if rule == "T3":
            s.node(label)
        s.color(w)
    elif rule == "B5":
        s.vertex(v).new_tuple(b5_triple(L, v, bag))
    elif rule == "T4":
        s.vertex(v).node(label)
    elif rule == "T5":
        s.vertex(v).node(label).new_tuple(bag - {v})
    else:
        raise EngineError(f"unknown rule {rule}", L.events)
    return s.commit()


Hook = Callable[[Ledger, Work, int, int], bool]


def process_vertex(L: Ledger, W: Work, x: int, v: int, hook: Hook | None = None) -> None:
    if v in L.gone:
        return
    if hook is not None and hook(L, W, x, v):
        return
    bag = W.bags[x]
    apply_rule(L, W.label(x), v, bag, select_rule(L.red, L.tuples_of, v, bag))


def process_node(L: Ledger, W: Work, x: int, keep=frozenset(), hook: Hook | None = None,
                 first: int | None = None) -> None:
    """Process leaf ``x`` of ``W`` with the basic algorithm and remove it.

    Vertices in ``keep`` are treated as shared with the (virtual) parent.
    ``hook`` may take over the handling of any single private vertex.
    ``first`` moves one private vertex to the front of the tuple-bound ones.
    """
    bag = W.bags[x]
    label = W.label(x)
    if W.children[x]:
        raise EngineError(f"node {label} is not a leaf", L.events)
    priv = sorted(W.private(x, keep))
    if len(bag) >= 4:
        done = set()
        if len(priv) > 1:
            while True:
                free = [v for v in priv if v not in done and v not in L.gone
                        and v not in L.red and not L.in_tuple(v)]
                if not free:
                    break
                process_vertex(L, W, x, free[0], hook)
                done.add(free[0])
        order = sorted(priv, key=lambda u: u != first)
        for v in order:
            if v not in done:
                process_vertex(L, W, x, v, hook)
    elif len(bag) == 3:
        _three_bag(L, W, x, priv, hook)
    else:
        raise EngineError(f"node {label} has a bag of size {len(bag)}", L.events)
    if L.nfunds.get(label):
        L.step("node_done", node=label).node(label).commit(reason="unused node fund")
    W.remove(x)


process_leaf = process_node


def _three_bag(L, W, x, priv, hook):
    label = W.label(x)
    bag = W.bags[x]
    live = [v for v in priv if v not in L.gone]
    if not live:
        return
    v = live[0]
    process_vertex(L, W, x, v, hook)
    rest = live[1:]
    if not rest:
        return
    others = bag - {v}
    pair = next((t for t in L.tuples.values() if t.members == others), None)
    s = L.step("rule", rule="C4", vertex=v, node=label, bag=sorted(bag))
    if pair is not None:
        outside = sorted(bag - set(priv))
        w = outside[0] if outside else min(others)
        s.vertex(w, remove=w in rest).end_all(w).color(w)
        for r in rest:
            if r != w:
                s.vertex(r)
        s.commit(reason="pair left on a 3-clique")
    else:
        for r in rest:
            s.vertex(r)
        s.commit(reason="remaining private vertices")
