"""The zloty-accounted clique transversal engine."""

from .branch import process_branch
from .drivers import (
    MODES, NotFourChordal, TransversalResult, bound, solve, solve_with_triangle,
    solve_without_triangle, theorem_a, theorem_b,
)
from .ledger import BoundMiss, DistinguishedTuple, EngineError, Ledger, LedgerError
from .replay import ReplayReport, ReplayViolation, dump_trace, load_trace, replay_verify
from .rules import BIG_RULES, TRI_RULES, Work, apply_rule, process_leaf, process_node, select_rule

__all__ = [
    "BIG_RULES", "TRI_RULES", "MODES", "BoundMiss", "DistinguishedTuple", "EngineError",
    "Ledger", "LedgerError", "NotFourChordal", "ReplayReport", "ReplayViolation",
    "TransversalResult", "Work", "apply_rule", "bound", "dump_trace", "load_trace",
    "process_branch", "process_leaf", "process_node", "replay_verify", "select_rule",
    "solve", "solve_with_triangle", "solve_without_triangle", "theorem_a", "theorem_b",
]
