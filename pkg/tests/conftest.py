import itertools

import pytest
from hypothesis import strategies as st

from cliquetrans import Graph, random_four_chordal


def graph_from(n, edges):
    return Graph.from_edges(n, edges)


@st.composite
def small_graphs(draw, max_n=8):
    """Arbitrary simple graphs on at most ``max_n`` vertices."""
    n = draw(st.integers(1, max_n))
    pairs = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


@st.composite
def four_chordal_graphs(draw, max_nodes=10):
    """Random 4-chordal graphs from the seeded generator."""
    seed = draw(st.integers(0, 2**20))
    nodes = draw(st.integers(1, max_nodes))
    max_bag = draw(st.integers(4, 7))
    tri = draw(st.sampled_from((0.0, 0.2, 0.5)))
    tight = draw(st.sampled_from((0.0, 0.5, 0.9)))
    return random_four_chordal(seed, nodes, max_bag, triangle_rate=tri, tight_rate=tight)


def disjoint_union(*graphs):
    edges, off = [], 0
    for g in graphs:
        edges += [(u + off, v + off) for u, v in g.edges()]
        off += g.n
    return Graph.from_edges(off, edges)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_report(request):
    """Record one pass/fail line per acceptance criterion for the terminal summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def report(number, ok, detail):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        lines.append(line)
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
