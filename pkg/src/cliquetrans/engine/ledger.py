"""Zloty ledger: vertex, node and tuple funds plus the event trace.

Every mutation goes through a :class:`Step`, which pools funds from named
sources, pays 7 per newly red vertex, funds new tuples, repays debt and
saves whatever is left.  Each committed step appends one trace event.
"""

from __future__ import annotations

from dataclasses import dataclass

VERTEX_FUNDS = 2
NODE_FUNDS = 1
PAIR_FUNDS = 3
TRIPLE_FUNDS = 2
PRICE = 7
MAX_DEBT = 1


class EngineError(RuntimeError):
    """An internal invariant of the engine was violated."""

    def __init__(self, message: str, trace: list[dict] | None = None):
        super().__init__(message)
        self.trace = trace or []


class LedgerError(EngineError):
    pass


class BoundMiss(EngineError):
    """A driver finished with more red vertices than the bound allows."""


@dataclass(frozen=True)
class DistinguishedTuple:
    id: int
    members: frozenset[int]
    funds: int
    lineage: tuple[int, ...] = ()

    @property
    def is_pair(self) -> bool:
        return len(self.members) == 2


class Ledger:
    def __init__(self, vertices):
        self.vfunds: dict[int, int] = {v: VERTEX_FUNDS for v in vertices}
        # first id free for auxiliary vertices that never carry funds
        self.limit = max(self.vfunds, default=-1) + 1
        self.initial = VERTEX_FUNDS * len(self.vfunds)
        self.nfunds: dict[str, int] = {}
        self.tuples: dict[int, DistinguishedTuple] = {}
        self.by_vertex: dict[int, set[int]] = {}
        self.red: set[int] = set()
        self.gone: set[int] = set()
        self.paid = 0
        self.saved = 0
        self.debt = 0
        self.events: list[dict] = []
        self.next_tid = 0

    def clone(self) -> "Ledger":
        c = Ledger.__new__(Ledger)
        c.vfunds = dict(self.vfunds)
        c.initial = self.initial
        c.limit = self.limit
        c.nfunds = dict(self.nfunds)
        c.tuples = dict(self.tuples)
        c.by_vertex = {v: set(s) for v, s in self.by_vertex.items() if s}
        c.red = set(self.red)
        c.gone = set(self.gone)
        c.paid, c.saved, c.debt = self.paid, self.saved, self.debt
        c.events = list(self.events)
        c.next_tid = self.next_tid
        return c

    def adopt(self, other: "Ledger") -> None:
        self.__dict__.update(other.__dict__)

    # --- queries

    def tuples_of(self, v: int) -> list[DistinguishedTuple]:
        return [self.tuples[i] for i in sorted(self.by_vertex.get(v, ()))]

    def in_tuple(self, v: int) -> bool:
        return bool(self.by_vertex.get(v))

    def held(self) -> int:
        return (
            sum(self.vfunds.values())
            + sum(self.nfunds.values())
            + sum(t.funds for t in self.tuples.values())
        )

    def balanced(self) -> bool:
        return self.initial == self.paid + self.saved + self.held() - self.debt

    # --- mutation

    def add_node_fund(self, label: str, bag) -> None:
        self.nfunds[label] = NODE_FUNDS
        self.initial += NODE_FUNDS
        self.events.append(
            {"i": len(self.events), "kind": "node_fund", "node": label,
             "bag": sorted(bag), "amount": NODE_FUNDS}
        )

    def mark(self, kind: str, **info) -> None:
        """Append a zero-money event such as a branch boundary."""
        self.events.append({"i": len(self.events), "kind": kind, **info})

    def step(self, kind: str, **info) -> "Step":
        return Step(self, kind, info)


class Step:
    """A staged ledger mutation; nothing changes until :meth:`commit` succeeds."""

    def __init__(self, ledger: Ledger, kind: str, info: dict):
        self.L = ledger
        self.kind = kind
        self.info = info
        self.sources: list[tuple[str, int]] = []
        self.taken: set[str] = set()
        self.colored: list[int] = []
        self.created: list[tuple[frozenset[int], int, tuple[int, ...]]] = []
        self.ended: list[int] = []
        self.removed: list[int] = []

    def _take(self, account: str, amount: int) -> None:
        if account not in self.taken:
            self.taken.add(account)
            if amount:
                self.sources.append((account, amount))

    def vertex(self, v: int, remove: bool = True) -> "Step":
        """Take all funds of ``v``; optionally remove ``v`` from the graph."""
        L = self.L
        if v in L.gone:
            raise LedgerError(f"vertex {v} was already removed", L.events)
        self._take(f"v:{v}", L.vfunds.get(v, 0))
        if remove and v not in self.removed:
            self.removed.append(v)
        return self

    def node(self, label: str) -> "Step":
        self._take(f"n:{label}", self.L.nfunds.get(label, 0))
        return self

    def end(self, tid: int) -> "Step":
        if tid in self.ended:
            return self
        self._take(f"t:{tid}", self.L.tuples[tid].funds)
        self.ended.append(tid)
        return self

    def end_all(self, v: int) -> "Step":
        for t in self.L.tuples_of(v):
            self.end(t.id)
        return self

    def color(self, v: int) -> "Step":
        if v in self.L.red or v in self.colored:
            raise LedgerError(f"vertex {v} is already red", self.L.events)
        self.colored.append(v)
        return self

    def new_tuple(self, members, lineage=()) -> "Step":
        members = frozenset(members)
        if len(members) not in (2, 3):
            raise LedgerError(f"tuple of size {len(members)}", self.L.events)
        funds = PAIR_FUNDS if len(members) == 2 else TRIPLE_FUNDS
        self.created.append((members, funds, tuple(lineage)))
        return self

    def commit(self, allow_debt: bool = False, reason: str | None = None) -> int:
        """Apply the step and return the number of zlotys it saved."""
        L = self.L
        pool = list(self.sources)
        moves: list[dict] = []
        debt = L.debt

        def fail(msg):
            raise LedgerError(msg, L.events)

        def pay(to: str, amount: int, may_borrow: bool = False):
            nonlocal debt
            while amount:
                if not pool:
                    if may_borrow and debt + amount <= MAX_DEBT:
                        moves.append({"from": "debt", "to": to, "amount": amount})
                        debt += amount
                        return
                    fail(f"{self.kind} {self.info.get('rule', '')}: short of {amount} for {to}")
                src, have = pool[0]
                take = min(have, amount)
                moves.append({"from": src, "to": to, "amount": take})
                amount -= take
                if take == have:
                    pool.pop(0)
                else:
                    pool[0] = (src, have - take)

        for v in self.colored:
            pay(f"paid:{v}", PRICE, allow_debt)
        tids = list(range(L.next_tid, L.next_tid + len(self.created)))
        for tid, (members, funds, lineage) in zip(tids, self.created):
            pay(f"t:{tid}", funds)
        repay = min(debt, sum(a for _, a in pool))
        if repay:
            pay("debt", repay)
            debt -= repay
        saved = sum(a for _, a in pool)
        for src, a in pool:
            moves.append({"from": src, "to": "saved", "amount": a})

        red = L.red | set(self.colored)
        gone = L.gone | set(self.removed)
        for members, _, _ in self.created:
            bad = sorted(u for u in members if u in red or u in gone)
            if bad:
                fail(f"tuple {sorted(members)} contains red or removed {bad}")
        ended = set(self.ended)
        for v in self.colored + self.removed:
            if any(tid not in ended for tid in L.by_vertex.get(v, ())):
                fail(f"vertex {v} left inside live tuples")

        for account in self.taken:
            kind, _, key = account.partition(":")
            if kind == "v":
                L.vfunds[int(key)] = 0
            elif kind == "n":
                L.nfunds[key] = 0
        for tid in self.ended:
            t = L.tuples.pop(tid)
            for u in t.members:
                L.by_vertex[u].discard(tid)
        L.red = red
        L.gone = gone
        for v in self.removed:
            L.vfunds.pop(v, None)
        L.paid += PRICE * len(self.colored)
        L.saved += saved
        L.debt = debt
        L.next_tid += len(self.created)
        created = []
        for tid, (members, funds, lineage) in zip(tids, self.created):
            L.tuples[tid] = DistinguishedTuple(tid, members, funds, lineage)
            for u in members:
                L.by_vertex.setdefault(u, set()).add(tid)
            created.append({"tuple": tid, "members": sorted(members), "funds": funds,
                            "lineage": list(lineage)})
        event = {"i": len(L.events), "kind": self.kind}
        event.update(self.info)
        event.update(
            moves=moves,
            colored=self.colored,
            ended=self.ended,
            created=created,
            removed=self.removed,
            saved=saved,
        )
        if reason:
            event["reason"] = reason
        L.events.append(event)
        return saved
