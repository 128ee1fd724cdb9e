import pytest
from hypothesis import given, settings

from cliquetrans import (
    BoundMiss, Graph, NotFourChordal, bound, complete_graph, h_graph, is_transversal,
    lower_bound_graph, min_transversal_exact, solve, solve_with_triangle, solve_without_triangle,
)
from cliquetrans.engine import replay_verify
from cliquetrans.graph import components_of

from conftest import disjoint_union, four_chordal_graphs


def test_bound_values():
    assert bound(5) == 1 and bound(8) == 2 and bound(4) == 0
    with pytest.raises(ValueError):
        bound(0)


@pytest.mark.parametrize("n", [5, 6, 7])
def test_small_complete_graphs(n):
    r = solve(complete_graph(n))
    assert r.size == 1 == bound(n) and r.bound_ok


def test_k4_is_the_exception():
    r = solve(complete_graph(4))
    assert r.size == 1 and not r.bound_ok


def test_k5_is_case_a():
    r = solve_without_triangle(complete_graph(5))
    assert r.size == 1
    assert [e.get("case") for e in r.trace if e["kind"] == "endgame"] == ["a"]


def test_h1_with_triangle_driver():
    r = solve_with_triangle(h_graph(1))
    assert r.size == 4 == bound(15) and r.t == 1
    assert r.saved == 3
    assert sum(1 for e in r.trace if e["kind"] == "branch_end") == 3


def test_h2_matches_oracle():
    g = h_graph(2)
    r = solve(g)
    assert r.size == 6 == min_transversal_exact(g).minimum_size


def test_lower_bound_12():
    g = lower_bound_graph(12)
    assert solve(g).size == 3


def test_two_k4_components():
    r = solve(disjoint_union(complete_graph(4), complete_graph(4)))
    assert r.size == 2 == bound(8) and r.bound_ok


def test_six_vertex_reduction_chain():
    g = Graph.from_cliques(6, [[0, 1, 2, 3], [0, 1, 2, 4], [1, 2, 4, 5]])
    r = solve_without_triangle(g)
    assert r.size <= bound(6) and r.size == min_transversal_exact(g).minimum_size == 1


def test_isolated_vertices_are_saved():
    g = Graph.from_edges(3, [])
    r = solve(g)
    assert r.red == frozenset() and r.saved == 6


def test_not_four_chordal():
    with pytest.raises(NotFourChordal) as exc:
        solve(complete_graph(3))
    assert exc.value.witness.edge is not None
    c4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    with pytest.raises(NotFourChordal):
        solve(c4)


def test_driver_preconditions():
    with pytest.raises(ValueError):
        solve_with_triangle(complete_graph(6))
    with pytest.raises(ValueError):
        solve_without_triangle(h_graph(1))
    with pytest.raises(ValueError):
        solve_without_triangle(disjoint_union(complete_graph(5), complete_graph(5)))
    with pytest.raises(ValueError):
        solve(h_graph(0), "thmA")
    with pytest.raises(ValueError):
        solve(h_graph(0), "fast")


def test_forced_modes():
    assert solve(h_graph(1), "thmA").size == 4
    assert solve(h_graph(0), "thmB").size == 2
    r = solve(h_graph(1), "basic")
    assert is_transversal(h_graph(1), r.red) is None


def test_bound_miss_is_an_engine_error():
    assert issubclass(BoundMiss, RuntimeError)


def test_determinism():
    g = h_graph(2)
    assert solve(g).trace == solve(g).trace


@settings(max_examples=150, deadline=None)
@given(four_chordal_graphs(max_nodes=14))
def test_solve_properties(g):
    r = solve(g)
    assert is_transversal(g, r.red) is None
    if g.n >= 5:
        assert r.size <= bound(g.n)
    assert 7 * r.size == 2 * g.n + r.t - r.saved
    rep = replay_verify(r.trace, g)
    assert rep.ok, rep.violation
    assert rep.red == r.red and rep.saved == r.saved
    if r.t:
        assert len(rep.branch_savings) >= r.t + 2
        assert min(rep.branch_savings) >= 1


@settings(max_examples=60, deadline=None)
@given(four_chordal_graphs(max_nodes=8))
def test_basic_mode_is_still_a_transversal(g):
    r = solve(g, "basic")
    assert is_transversal(g, r.red) is None
    assert replay_verify(r.trace, g).ok


@settings(max_examples=40, deadline=None)
@given(four_chordal_graphs(max_nodes=6))
def test_engine_never_beats_the_oracle(g):
    if g.n > 20:
        return
    assert min_transversal_exact(g).minimum_size <= solve(g).size


@settings(max_examples=40, deadline=None)
@given(four_chordal_graphs(max_nodes=8), four_chordal_graphs(max_nodes=8))
def test_components_are_independent(a, b):
    g = disjoint_union(a, b)
    r = solve(g)
    assert r.size == solve(a).size + solve(b).size
    assert len(components_of(g.as_dict())) >= 2


def test_star_of_four_leaves_uses_two_leaf_pairs():
    g = Graph.from_cliques(8, [[0, 1, 2, 3], [0, 1, 2, 4], [0, 1, 3, 5], [0, 2, 3, 6], [1, 2, 3, 7]])
    r = solve(g)
    reasons = [e.get("rule") for e in r.trace if e["kind"] == "surgery"]
    assert reasons == ["f3", "f3"]
    assert r.size <= bound(8) and r.saved >= 2


def test_root_with_inner_child_saves_two():
    from cliquetrans.engine import Ledger
    from cliquetrans.engine.drivers import _Tree, _adj_from_bags, _root_with_inner_child

    bags = {0: frozenset({0, 1, 2, 3}), 1: frozenset({0, 1, 2, 4}), 2: frozenset({1, 2, 3, 5}),
            3: frozenset({1, 2, 3, 6}), 4: frozenset({2, 3, 5, 7})}
    T = _Tree(bags, [(0, 1), (0, 2), (2, 3), (2, 4)])
    # maximum-degree rooting never produces this shape, so root it by hand
    T.root = 0
    T.orient()
    L = Ledger(range(8))
    _root_with_inner_child(L, _adj_from_bags(bags.values()), T, "t")
    g = Graph.from_cliques(8, bags.values())
    assert L.gone == set(range(8)) and not L.tuples and L.saved >= 2
    assert is_transversal(g, L.red) is None
    assert replay_verify(L.events, g).ok
