import pytest

from cliquetrans import Graph, solve
from cliquetrans.engine import EngineError, Ledger, Work, process_branch, replay_verify
from cliquetrans.engine.branch import SurgeryFailed, _Surgery

from engine_helpers import seed_tuples, sources

BAG = frozenset(range(8))


def fire(L, v=0, alpha=6, beta=7, bag=BAG):
    W = Work({0: bag}, {0: None}, "b")
    s = _Surgery([0], 0, alpha, beta, frozenset({alpha, beta}), 0)
    assert s.at_uk(L, W, 0, v)
    assert L.balanced()
    return s, L.events[-1]


def total(ev):
    return sum(sources(ev).values())


def test_b2_partner_in_the_triple():
    L = Ledger(range(8))
    seed_tuples(L, {0, 1}, {0, 1, 2})
    _, ev = fire(L)
    assert ev["colored"] == [1] and total(ev) == 9 and ev["saved"] == 2


def test_b2_partner_in_another_pair():
    L = Ledger(range(8))
    pair, triple, other = seed_tuples(L, {0, 2}, {0, 1, 5}, {2, 3})
    _, ev = fire(L)
    assert total(ev) == 12
    assert ev["colored"] == [2] and ev["saved"] == 2
    (new,) = ev["created"]
    assert new["members"] == [1, 5] and new["funds"] == 3 and new["lineage"] == [triple]
    assert sorted(ev["ended"]) == [pair, triple, other]


def test_b2_partner_is_a_root_vertex():
    L = Ledger(range(8))
    seed_tuples(L, {0, 6}, {0, 1, 2}, {1, 3})
    _, ev = fire(L)
    assert sorted(ev["colored"]) == [1, 6]
    assert total(ev) == 14 and ev["saved"] == 0
    assert not L.tuples


def test_b2_root_partner_avoids_the_other_root_vertex():
    # v1 = 1 is paired with beta, so the triple's other vertex is used
    L = Ledger(range(8))
    seed_tuples(L, {0, 6}, {0, 1, 2}, {1, 7}, {2, 4})
    _, ev = fire(L)
    assert sorted(ev["colored"]) == [2, 6]


def test_b2_root_partner_without_usable_vertex():
    L = Ledger(range(8))
    seed_tuples(L, {0, 6}, {0, 1, 7}, {1, 7})
    W = Work({0: BAG}, {0: None}, "b")
    s = _Surgery([0], 0, 6, 7, frozenset({6, 7}), 0)
    with pytest.raises(SurgeryFailed):
        s.at_uk(L, W, 0, 0)


def test_b3_with_shared_vertex_saves_one():
    L = Ledger(range(8))
    seed_tuples(L, {0, 1, 2}, {0, 1, 3})
    _, ev = fire(L)
    assert ev["colored"] == [1] and total(ev) == 8 and ev["saved"] == 1


def test_b3_disjoint_borrows_one():
    L = Ledger(range(8))
    seed_tuples(L, {0, 1, 2}, {0, 3, 4})
    s, ev = fire(L)
    assert ev["colored"] == [0] and total(ev) == 7 and sources(ev)["debt"] == 1
    assert L.debt == 1 and s.mode == "quad" and s.quad == [1, 2, 3, 4]


def test_other_rules_are_left_alone():
    L = Ledger(range(8))
    seed_tuples(L, {0, 1, 2})
    W = Work({0: BAG}, {0: None}, "b")
    s = _Surgery([0], 0, 6, 7, frozenset({6, 7}), 0)
    assert not s.at_uk(L, W, 0, 0) and not s.fired and not L.events


def test_quad_bag_equal_to_quad_removes_a_vertex():
    L = Ledger(range(8))
    seed_tuples(L, {0, 1, 2}, {0, 3, 4})
    s, _ = fire(L)
    W = Work({0: frozenset({1, 2, 3, 4}), 1: frozenset({1, 2, 3, 6}), 2: frozenset({2, 3, 6, 7})},
             {0: None, 1: 0, 2: 1}, "b")
    s.path = [9, 0]
    s.before_node(L, W, 1)
    ev = L.events[-1]
    assert ev["rule"] == "quad" and ev["removed"] == [1] and L.debt == 0 and ev["saved"] == 1
    assert s.covered == 0


# --- whole branches


def test_branch_with_two_private_leaf_saves_at_once():
    # root {0,1,2,3} with alpha, beta = 0, 1; leaf {2,3,4,5}
    L = Ledger(range(6))
    W = Work({0: frozenset({0, 1, 2, 3}), 1: frozenset({2, 3, 4, 5})}, {0: None, 1: 0}, "b")
    saved = process_branch(L, W, 0, 0, 1)
    assert saved >= 1 and L.debt == 0
    assert [e["kind"] for e in L.events][0] == "branch_begin"
    assert L.events[-1] == {"i": len(L.events) - 1, "kind": "branch_end", "node": "b.0",
                            "saved": saved}
    assert not W.bags or set(W.bags) == set()


def test_branch_that_cannot_save_raises():
    # a single bag whose private vertices are all red saves nothing
    L = Ledger(range(4))
    L.red |= {2, 3}
    L.initial -= 4
    L.vfunds[2] = L.vfunds[3] = 0
    W = Work({0: frozenset({0, 1, 2, 3})}, {0: None}, "b")
    with pytest.raises(EngineError, match="saved nothing"):
        process_branch(L, W, 0, 0, 1)


def test_private_order_regression():
    # the root-partner argument needs the other private vertex of u_k first
    edges = [(0, 2), (0, 3), (0, 6), (0, 7), (0, 8), (0, 9), (1, 5), (1, 6), (1, 8), (2, 8),
             (2, 9), (3, 4), (3, 6), (3, 7), (3, 8), (3, 9), (4, 6), (4, 9), (5, 6), (5, 8),
             (6, 7), (6, 8), (6, 9), (7, 8), (7, 9), (8, 9)]
    g = Graph.from_edges(10, edges)
    r = solve(g)
    assert r.size <= 2 and replay_verify(r.trace, g).ok
    assert any(e.get("rule") == "B2" and e["kind"] == "surgery" for e in r.trace)


def quad_state(triples, bags, parents, pairs=()):
    L = Ledger(range(10))
    seed_tuples(L, *triples, *pairs)
    s, _ = fire(L)
    W = Work(bags, parents, "b")
    s.path = [9, 0, 1]
    return L, W, s


def test_quad_root_vertex_colored():
    L, W, s = quad_state([{0, 1, 2}, {0, 3, 4}],
                         {0: frozenset({1, 2, 3, 4, 6}), 1: frozenset({1, 2, 6, 7})},
                         {0: 1, 1: None})
    s.before_node(L, W, 1)
    ev = L.events[-1]
    assert ev["colored"] == [6] and total(ev) == 10
    assert L.debt == 0 and ev["saved"] == 2 and s.mode == "done"


def test_quad_root_pair():
    L, W, s = quad_state([{0, 1, 2}, {0, 3, 7}],
                         {0: frozenset({1, 2, 3, 6, 7}), 1: frozenset({1, 6, 7, 8})},
                         {0: 1, 1: None})
    s.before_node(L, W, 1)
    ev = L.events[-1]
    assert ev["colored"] == [] and total(ev) == 6
    assert [c["members"] for c in ev["created"]] == [[6, 7]]
    assert L.debt == 0 and ev["saved"] == 2 and s.pair == frozenset({6, 7})


def test_quad_neighbour_through_its_pair():
    L, W, s = quad_state([{0, 1, 2}, {0, 3, 4}],
                         {0: frozenset({1, 2, 3, 4, 5}), 1: frozenset({1, 5, 6, 7})},
                         {0: 1, 1: None}, pairs=[{5, 8}])
    s.before_node(L, W, 1)
    ev = L.events[-1]
    assert ev["colored"] == [5] and total(ev) == 7 and L.debt == 1
    assert s.mode == "await" and s.y_partner == 8 and s.quad == [1, 3, 4]


def test_quad_with_red_vertex_defers_to_g5():
    L, W, s = quad_state([{0, 1, 2}, {0, 3, 4}],
                         {0: frozenset({1, 2, 3, 4, 5}), 1: frozenset({1, 5, 6, 7})},
                         {0: 1, 1: None})
    L.red.add(5)
    n = len(L.events)
    s.before_node(L, W, 1)
    assert s.mode == "done" and len(L.events) == n
