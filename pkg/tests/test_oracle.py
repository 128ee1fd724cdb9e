import pytest
from hypothesis import given, settings

from cliquetrans import (
    CapExceeded, Graph, bron_kerbosch, complete_graph, h_graph, is_chordal, is_transversal,
    maximal_cliques, min_transversal_exact, min_transversal_naive,
)
from cliquetrans.generators import h_labels

from conftest import disjoint_union, small_graphs


def test_bron_kerbosch_c4_gives_edges():
    c4 = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
    assert bron_kerbosch(c4) == {frozenset(e) for e in [(0, 1), (1, 2), (2, 3), (0, 3)]}


def test_bron_kerbosch_k4():
    assert bron_kerbosch(complete_graph(4)) == {frozenset(range(4))}


def test_bron_kerbosch_h0_matches_peo():
    g = h_graph(0)
    assert bron_kerbosch(g) == set(maximal_cliques(g, is_chordal(g).peo))


def test_is_transversal_examples():
    k4 = complete_graph(4)
    assert is_transversal(k4, {0}) is None
    assert is_transversal(disjoint_union(k4, k4), {0}) == frozenset(range(4, 8))
    names = h_labels(0)
    assert is_transversal(h_graph(0), {names.index("a"), names.index("d")}) is None


def test_is_transversal_ignores_isolated_vertices():
    assert is_transversal(Graph.from_edges(3, [(0, 1)]), {0}) is None


def test_exact_minimum_examples():
    assert min_transversal_exact(complete_graph(7)).minimum_size == 1
    assert min_transversal_exact(h_graph(0)).minimum_size == 2
    res = min_transversal_exact(h_graph(2))
    assert res.minimum_size == 6
    assert is_transversal(h_graph(2), res.witness) is None
    assert res.explored > 0


def test_edgeless_graph_needs_nothing():
    assert min_transversal_exact(Graph.from_edges(3, [])).minimum_size == 0


def test_cap_exceeded_is_signalled():
    with pytest.raises(CapExceeded) as exc:
        min_transversal_exact(h_graph(2), 5)
    assert exc.value.cap == 5
    assert min_transversal_exact(h_graph(2), 6).minimum_size == 6


@settings(max_examples=200, deadline=None)
@given(small_graphs(max_n=9))
def test_exact_matches_naive(g):
    res = min_transversal_exact(g)
    assert res.minimum_size == min_transversal_naive(g)
    assert is_transversal(g, res.witness) is None
    assert len(res.witness) == res.minimum_size
