"""Independent re-execution of a zloty trace against the input graph."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..graph import Graph, chordal_cliques
from ..oracle import is_transversal
from .ledger import MAX_DEBT, PAIR_FUNDS, PRICE, TRIPLE_FUNDS, VERTEX_FUNDS, DistinguishedTuple
from .rules import BIG_RULES, TRI_RULES, select_rule


def dump_trace(events) -> str:
    return "".join(json.dumps(e, sort_keys=True) + "\n" for e in events)


def load_trace(text: str) -> list[dict]:
    return [json.loads(line) for line in text.splitlines() if line.strip()]


class ReplayViolation(Exception):
    def __init__(self, index: int | None, message: str):
        where = "end of trace" if index is None else f"event {index}"
        super().__init__(f"{where}: {message}")
        self.index = index
        self.message = message


@dataclass
class ReplayReport:
    ok: bool
    red: frozenset[int] = frozenset()
    saved: int = 0
    paid: int = 0
    n: int = 0
    t: int = 0
    branch_savings: list[int] = field(default_factory=list)
    violation: ReplayViolation | None = None


def replay_verify(trace, g: Graph, d=None) -> ReplayReport:
    """Re-execute ``trace`` on ``g``; the report names the first failing event."""
    try:
        return _replay(list(trace), g, d)
    except ReplayViolation as exc:
        return ReplayReport(False, violation=exc)


def _replay(events, g, d):
    adj = g.adj
    triangles = {c for c in chordal_cliques(g.as_dict()) if len(c) == 3}
    allowed_bags = None if d is None else {frozenset(b) for b in d.bags}
    vfunds = {v: VERTEX_FUNDS for v in range(g.n)}
    nfunds: dict[str, int] = {}
    tuples: dict[int, DistinguishedTuple] = {}
    tbal: dict[int, int] = {}
    by_vertex: dict[int, set[int]] = {}
    red: set[int] = set()
    gone: set[int] = set()
    initial = VERTEX_FUNDS * g.n
    paid = saved = debt = 0
    branch_stack: list[int] = []
    branch_savings: list[int] = []
    seen_tids: set[int] = set()

    def tuples_of(v):
        return [tuples[i] for i in sorted(by_vertex.get(v, ()))]

    for pos, ev in enumerate(events):
        def fail(msg):
            raise ReplayViolation(ev.get("i", pos), msg)

        if ev.get("i") != pos:
            fail(f"event index {ev.get('i')} out of sequence")
        kind = ev.get("kind")
        if kind == "node_fund":
            bag = frozenset(ev["bag"])
            if bag not in triangles:
                fail(f"node fund on {sorted(bag)}, which is not a maximal 3-clique")
            if allowed_bags is not None and bag not in allowed_bags:
                fail("node fund on a bag outside the decomposition")
            if ev["node"] in nfunds or ev.get("amount") != 1:
                fail("duplicate or malformed node fund")
            nfunds[ev["node"]] = 1
            initial += 1
            continue
        if kind == "branch_begin":
            branch_stack.append(saved)
            continue
        if kind == "branch_end":
            if not branch_stack:
                fail("branch end without a beginning")
            delta = saved - branch_stack.pop()
            if delta < 1:
                fail("branch saved nothing")
            if delta != ev.get("saved"):
                fail(f"branch reports {ev.get('saved')} saved, replay finds {delta}")
            if debt:
                fail("branch ended with debt")
            branch_savings.append(delta)
            continue
        if "moves" not in ev:
            continue

        if kind == "rule" and ev.get("rule") in BIG_RULES + TRI_RULES:
            v, bag = ev["vertex"], frozenset(ev["bag"])
            if v in gone:
                fail(f"rule applied to removed vertex {v}")
            want = select_rule(red, tuples_of, v, bag)
            if want != ev["rule"]:
                fail(f"rule {ev['rule']} applied where {want} comes first")

        colored = list(ev.get("colored", []))
        created = {c["tuple"]: c for c in ev.get("created", [])}
        ended = list(ev.get("ended", []))
        removed = list(ev.get("removed", []))
        got_paid: dict[int, int] = {}
        into: dict[int, int] = {}
        step_saved = 0
        for tid in ended:
            if tid not in tuples:
                fail(f"ends unknown tuple {tid}")
        for tid in created:
            if tid in seen_tids:
                fail(f"tuple id {tid} reused")
            seen_tids.add(tid)
        for m in ev["moves"]:
            src, dst, amount = m["from"], m["to"], m["amount"]
            if not isinstance(amount, int) or amount <= 0:
                fail(f"bad amount {amount!r}")
            kind_s, _, key = src.partition(":")
            if kind_s == "v":
                v = int(key)
                if vfunds.get(v, 0) < amount:
                    fail(f"vertex {v} overdrawn")
                vfunds[v] -= amount
            elif kind_s == "n":
                if nfunds.get(key, 0) < amount:
                    fail(f"node {key} overdrawn")
                nfunds[key] -= amount
            elif kind_s == "t":
                tid = int(key)
                if tid not in tuples or tid not in ended:
                    fail(f"funds drawn from tuple {tid} that does not end here")
                if tbal[tid] < amount:
                    fail(f"tuple {tid} overdrawn")
                tbal[tid] -= amount
            elif src == "debt":
                debt += amount
                if debt > MAX_DEBT:
                    fail("debt above the cap")
            else:
                fail(f"unknown source account {src}")
            kind_d, _, key = dst.partition(":")
            if kind_d == "paid":
                got_paid[int(key)] = got_paid.get(int(key), 0) + amount
                paid += amount
            elif kind_d == "t":
                if int(key) not in created:
                    fail(f"funds sent to tuple {key} not created here")
                into[int(key)] = into.get(int(key), 0) + amount
            elif dst == "saved":
                saved += amount
                step_saved += amount
            elif dst == "debt":
                if debt < amount:
                    fail("repays more than the debt")
                debt -= amount
            else:
                fail(f"unknown destination account {dst}")
        if step_saved != ev.get("saved"):
            fail(f"event claims {ev.get('saved')} saved, moves give {step_saved}")
        if set(got_paid) != set(colored) or any(a != PRICE for a in got_paid.values()):
            fail(f"payments {got_paid} do not match colored {colored}")
        for v in colored:
            if v in red:
                fail(f"vertex {v} colored twice")
            if v in gone:
                fail(f"removed vertex {v} colored")
            red.add(v)
        lineage = {p for c in created.values() for p in c.get("lineage", [])}
        for tid in ended:
            t = tuples.pop(tid)
            if tbal.pop(tid):
                fail(f"tuple {tid} ended with funds left")
            for u in t.members:
                by_vertex[u].discard(tid)
            if not (t.members & set(colored)) and tid not in lineage and kind != "teardown":
                fail(f"tuple {tid} ended without a red member or successor")
        for v in removed:
            if v in gone:
                fail(f"vertex {v} removed twice")
            gone.add(v)
            if vfunds.get(v, 0):
                fail(f"vertex {v} removed holding {vfunds[v]} zlotys")
        for tid, c in created.items():
            members = frozenset(c["members"])
            want = {2: PAIR_FUNDS, 3: TRIPLE_FUNDS}.get(len(members))
            if want is None or c["funds"] != want or into.get(tid, 0) != want:
                fail(f"tuple {tid} created with wrong size or funds")
            if any(u in red or u in gone for u in members):
                fail(f"tuple {tid} contains a red or removed vertex")
            if any(b not in adj[a] for a in members for b in members if a != b):
                fail(f"tuple {tid} is not a clique")
            for p in c.get("lineage", []):
                if p not in ended:
                    fail(f"tuple {tid} claims a predecessor {p} that did not end here")
            tuples[tid] = DistinguishedTuple(tid, members, want, tuple(c.get("lineage", [])))
            tbal[tid] = want
            for u in members:
                by_vertex.setdefault(u, set()).add(tid)
        for v in set(colored) | set(removed):
            if by_vertex.get(v):
                fail(f"vertex {v} still inside a live tuple")
        held = sum(vfunds.values()) + sum(nfunds.values()) + sum(tbal.values())
        if initial != paid + saved + held - debt:
            fail("conservation broken")

    if branch_stack:
        raise ReplayViolation(None, "branch left open")
    if tuples:
        raise ReplayViolation(None, f"{len(tuples)} tuples still live")
    if debt:
        raise ReplayViolation(None, "debt outstanding")
    t = len(triangles)
    if len(nfunds) != t:
        raise ReplayViolation(None, f"{len(nfunds)} node funds for t={t}")
    if any(nfunds.values()):
        raise ReplayViolation(None, "node funds left unspent")
    for v, amount in vfunds.items():
        if amount and adj[v]:
            raise ReplayViolation(None, f"vertex {v} was never processed")
    # isolated vertices never entered the trace; their funds count as saved
    saved += sum(vfunds.values())
    if 7 * len(red) != 2 * g.n + t - saved:
        raise ReplayViolation(None, "7|X| = 2n + t - s fails")
    missed = is_transversal(g, red)
    if missed is not None:
        raise ReplayViolation(None, f"red set misses clique {sorted(missed)}")
    return ReplayReport(True, frozenset(red), saved, paid, g.n, t, branch_savings)
