"""Clique transversals of 4-chordal graphs with at most 2(n-1)/7 vertices."""

from .decomp import (
    Branch, DecompositionError, NiceDecomposition, TreeDecomposition, find_branches,
    make_nice, maximal_clique_tree, nice_decomposition, validate_nice,
)
from .engine import (
    BoundMiss, EngineError, NotFourChordal, TransversalResult, bound, dump_trace, load_trace,
    replay_verify, solve, solve_with_triangle, solve_without_triangle,
)
from .generators import GenSpec, complete_graph, fuzz_graph, h_graph, lower_bound_graph, random_four_chordal
from .graph import (
    Graph, GraphParseError, connected_components, count_maximal_triangles, is_chordal,
    is_four_chordal, maximal_cliques, parse_graph,
)
from .oracle import (
    CapExceeded, OracleResult, bron_kerbosch, is_transversal, min_transversal_exact,
    min_transversal_naive,
)

__version__ = "0.1.0"
