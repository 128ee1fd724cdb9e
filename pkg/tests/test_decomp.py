import pytest
from hypothesis import given, settings

from cliquetrans import (
    DecompositionError, Graph, NiceDecomposition, TreeDecomposition, complete_graph,
    find_branches, h_graph, is_chordal, make_nice, maximal_clique_tree, nice_decomposition,
    validate_nice,
)
from cliquetrans.generators import h_labels
from cliquetrans.graph import chordal_cliques, components_of

from conftest import four_chordal_graphs


def ids(k, *names):
    labels = h_labels(k)
    return frozenset(labels.index(x) for x in names)


def default_root(g):
    cl = chordal_cliques(g.as_dict())
    tri = [c for c in cl if len(c) == 3]
    return min(tri or [c for c in cl if len(c) >= 4], key=sorted)


def test_clique_tree_of_h0_is_a_path():
    g = h_graph(0)
    d = maximal_clique_tree(g, is_chordal(g).peo)
    assert len(d) == 3
    degrees = [sum(1 for e in d.tree_edges() if x in e) for x in range(3)]
    assert sorted(degrees) == [1, 1, 2]
    assert set(d.bags) == set(chordal_cliques(g.as_dict()))


def test_clique_tree_needs_an_edge():
    g = Graph.from_edges(2, [])
    with pytest.raises(DecompositionError):
        maximal_clique_tree(g, is_chordal(g).peo)


def test_nice_rooted_at_the_triangle_of_h1():
    g = h_graph(1)
    tri = ids(1, "b1", "b1'", "b1''")
    d = nice_decomposition(g, tri)
    assert d.bags[d.root] == tri
    assert validate_nice(d, g) == []


def test_nice_h0_rooted_at_connector():
    g = h_graph(0)
    d = nice_decomposition(g, ids(0, "a''", "a'''", "d", "d'"))
    assert validate_nice(d, g) == []
    assert all(len(b) == 4 for b in d.bags)


def test_nice_rejects_bad_roots():
    g = h_graph(1)
    with pytest.raises(DecompositionError):
        nice_decomposition(g, ids(1, "a", "a'", "a''", "a'''"))
    with pytest.raises(DecompositionError):
        nice_decomposition(h_graph(0), ids(0, "a", "a'", "a''"))
    with pytest.raises(DecompositionError):
        nice_decomposition(complete_graph(3), {0, 1, 2})


def test_subdivision_drops_the_largest_private_vertex():
    bags = {0: frozenset({0, 1, 2, 3}), 1: frozenset({2, 3, 4, 5, 6, 7})}
    d = make_nice(bags, [(0, 1)], 0)
    assert [sorted(b) for b in d.bags] == [[0, 1, 2, 3], [2, 3, 4, 5], [2, 3, 4, 5, 6],
                                           [2, 3, 4, 5, 6, 7]]
    assert d.parent == (None, 0, 1, 2)
    assert d.origin == (0, None, None, 1)


def test_equal_adjacent_bags_are_contracted():
    k = frozenset(range(4))
    d = make_nice({0: k, 1: k, 2: frozenset({2, 3, 4, 5})}, [(0, 1), (1, 2)], 0)
    assert len(d) == 2 and d.parent == (None, 0)


def test_validate_flags_duplicate_bags():
    g = complete_graph(4)
    k = frozenset(range(4))
    d = TreeDecomposition((k, k), (None, 0), 0)
    assert any("adjacent duplicate bags" in p for p in validate_nice(d, g))


def test_validate_flags_k_minus_one_sharing():
    g = Graph.from_cliques(7, [range(6), [3, 4, 5, 6]])
    d = TreeDecomposition((frozenset({3, 4, 5, 6}), frozenset(range(6))), (None, 0), 0)
    assert any("k-1 sharing" in p for p in validate_nice(d, g))


def test_validate_flags_broken_subtree_and_coverage():
    g = Graph.from_cliques(6, [[0, 1, 2, 3], [2, 3, 4, 5]])
    d = TreeDecomposition((frozenset({0, 1, 2, 3}),), (None,), 0)
    problems = validate_nice(d, g)
    assert any("not covered" in p for p in problems)


def test_branches_of_h1():
    g = h_graph(1)
    d = nice_decomposition(g, ids(1, "b1", "b1'", "b1''"))
    branches = find_branches(d)
    assert len(branches) == 3
    for b in branches:
        assert len(d.bags[b.root_node]) == 4
        assert d.bags[b.root_node] & d.bags[d.parent[b.root_node]] == {b.alpha, b.beta}


def test_k5_has_no_branch():
    g = complete_graph(5)
    d = nice_decomposition(g, range(5))
    assert len(d) == 1 and find_branches(d) == []


def test_triangle_free_root_subtree_never_counted():
    g = h_graph(0)
    d = nice_decomposition(g, ids(0, "a", "a'", "a''", "a'''"))
    assert all(b.root_node != d.root for b in find_branches(d))


@settings(max_examples=120, deadline=None)
@given(four_chordal_graphs())
def test_clique_tree_round_trip(g):
    d = maximal_clique_tree(g, is_chordal(g).peo)
    rebuilt = Graph.from_cliques(g.n, d.bags)
    assert rebuilt == g


@settings(max_examples=120, deadline=None)
@given(four_chordal_graphs())
def test_nice_decomposition_properties(g):
    if len(components_of(g.as_dict())) != 1:
        return
    d = nice_decomposition(g, default_root(g))
    assert isinstance(d, NiceDecomposition)
    assert validate_nice(d, g) == []
    largest = max(map(len, d.bags))
    assert d.steps <= 4 * g.n * largest ** 2
    for v in range(g.n):
        holders = {x for x, b in enumerate(d.bags) if v in b}
        assert len([x for x in holders if d.parent[x] not in holders]) == 1
    t = sum(1 for c in chordal_cliques(g.as_dict()) if len(c) == 3)
    branches = find_branches(d)
    if t:
        assert len(branches) >= t + 2
    nodes = [x for b in branches for x in b.node_set]
    assert len(nodes) == len(set(nodes))
