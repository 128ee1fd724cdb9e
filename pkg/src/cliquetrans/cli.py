"""The ``ct`` command line tool.

Vertex ids on the command line and in printed sets are 1-indexed, as in graph
files.  Traces use the engine's 0-indexed ids.

Exit codes: 0 success, 1 input or user error, 2 oracle cap exceeded,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from multiprocessing import Pool

from .decomp import DecompositionError, find_branches, nice_decomposition, validate_nice
from .engine import (
    MODES, BoundMiss, EngineError, NotFourChordal, bound, dump_trace, load_trace, replay_verify,
    solve,
)
from .generators import complete_graph, fuzz_graph, h_graph, lower_bound_graph, random_four_chordal
from .graph import GraphParseError, chordal_cliques, count_maximal_triangles, is_chordal, is_four_chordal, parse_graph
from .oracle import CapExceeded, is_transversal, min_transversal_exact

OK, USER_ERROR, CAP_EXCEEDED, INTERNAL = 0, 1, 2, 3
FAILURE_TRACE = "ct-failure.jsonl"


class UserError(Exception):
    pass


def _load(path):
    try:
        with open(path) as fh:
            return parse_graph(fh.read())
    except OSError as exc:
        raise UserError(f"cannot read {path}: {exc.strerror}") from None
    except GraphParseError as exc:
        raise UserError(f"{path}: {exc}") from None


def _ids(vs):
    return sorted(v + 1 for v in vs)


def _fmt(vs):
    return "{" + ", ".join(map(str, _ids(vs))) + "}"


def _emit(args, data: dict, lines: list[str]):
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        print("\n".join(lines))


def _write_trace(path, events):
    with open(path, "w") as fh:
        fh.write(dump_trace(events))


# --- subcommands


def cmd_check(args):
    g = _load(args.file)
    chordal = bool(is_chordal(g))
    four = is_four_chordal(g)
    t = count_maximal_triangles(g) if chordal else None
    data = {"n": g.n, "m": g.m, "chordal": chordal, "four_chordal": bool(four), "t": t}
    lines = [f"n {g.n}", f"m {g.m}", f"chordal {'yes' if chordal else 'no'}",
             f"4-chordal {'yes' if four else 'no'}"]
    if four.edge is not None:
        data["witness_edge"] = _ids(four.edge)
        lines.append(f"edge in no 4-clique {_fmt(four.edge)}")
    if four.cycle is not None:
        data["witness_cycle"] = [v + 1 for v in four.cycle]
        lines.append("induced cycle " + " ".join(str(v + 1) for v in four.cycle))
    if t is not None:
        lines.append(f"t {t}")
    _emit(args, data, lines)
    return OK


def cmd_cliques(args):
    g = _load(args.file)
    if not is_chordal(g):
        raise UserError("graph is not chordal")
    cliques = sorted(_ids(c) for c in chordal_cliques(g.as_dict()) if len(c) >= 2)
    _emit(args, {"cliques": cliques},
          [" ".join(map(str, c)) for c in cliques] or ["no non-trivial cliques"])
    return OK


def cmd_decompose(args):
    g = _load(args.file)
    if not is_four_chordal(g):
        raise UserError("graph is not 4-chordal")
    cliques = chordal_cliques(g.as_dict())
    big = [c for c in cliques if len(c) >= 3]
    if not big:
        raise UserError("graph has no clique of size three or more")
    if args.root:
        root = frozenset(int(x) - 1 for x in args.root.replace(",", " ").split())
    else:
        tri = [c for c in big if len(c) == 3]
        root = min(tri or big, key=sorted)
    try:
        d = nice_decomposition(g, root)
    except DecompositionError as exc:
        raise UserError(str(exc)) from None
    nodes = [{"id": x, "bag": _ids(b), "parent": d.parent[x]} for x, b in enumerate(d.bags)]
    branches = [{"root": b.root_node, "alpha": b.alpha + 1, "beta": b.beta + 1,
                 "nodes": sorted(b.node_set)} for b in find_branches(d)]
    problems = validate_nice(d, g)
    data = {"nodes": nodes, "branches": branches, "valid": not problems}
    lines = [f"node {e['id']} parent {e['parent']} bag {' '.join(map(str, e['bag']))}"
             for e in nodes]
    lines += [f"branch at node {b['root']} alpha {b['alpha']} beta {b['beta']}, "
              f"{len(b['nodes'])} nodes" for b in branches]
    lines.append("valid" if not problems else "invalid: " + "; ".join(problems))
    _emit(args, data, lines)
    return OK if not problems else INTERNAL


def cmd_solve(args):
    g = _load(args.file)
    try:
        r = solve(g, args.mode)
    except NotFourChordal as exc:
        raise UserError(str(exc)) from None
    except ValueError as exc:
        raise UserError(str(exc)) from None
    except EngineError as exc:
        path = args.trace or FAILURE_TRACE
        _write_trace(path, exc.trace)
        kind = "bound miss" if isinstance(exc, BoundMiss) else "engine error"
        print(f"{kind}: {exc}; trace written to {path}", file=sys.stderr)
        return INTERNAL
    if args.trace:
        _write_trace(args.trace, r.trace)
    b = bound(g.n) if g.n else 0
    data = {"red": _ids(r.red), "size": r.size, "bound": b, "saved": r.saved,
            "n": g.n, "t": r.t, "bound_ok": r.bound_ok}
    lines = [f"red {_fmt(r.red)}", f"size {r.size}", f"bound {b}", f"saved {r.saved}",
             f"n {g.n}", f"t {r.t}"]
    if not r.bound_ok:
        lines.append("bound exceeded (allowed only below five vertices)")
    _emit(args, data, lines)
    return OK


def cmd_verify(args):
    g = _load(args.file)
    if args.set is not None:
        try:
            vs = {int(x) - 1 for x in args.set.replace(",", " ").split()}
        except ValueError:
            raise UserError("--set takes vertex ids separated by spaces or commas") from None
        if any(not 0 <= v < g.n for v in vs):
            raise UserError(f"--set ids must lie in 1..{g.n}")
        missed = is_transversal(g, vs)
        if missed is None:
            _emit(args, {"transversal": True, "size": len(vs)},
                  [f"transversal of size {len(vs)}"])
            return OK
        _emit(args, {"transversal": False, "missed": _ids(missed)},
              [f"not a transversal: misses clique {_fmt(missed)}"])
        return USER_ERROR
    try:
        with open(args.trace) as fh:
            events = load_trace(fh.read())
    except OSError as exc:
        raise UserError(f"cannot read {args.trace}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UserError(f"{args.trace}: malformed trace ({exc})") from None
    rep = replay_verify(events, g)
    if not rep.ok:
        _emit(args, {"ok": False, "index": rep.violation.index, "message": rep.violation.message},
              [f"replay failed at {rep.violation}"])
        return INTERNAL
    data = {"ok": True, "red": _ids(rep.red), "size": len(rep.red), "saved": rep.saved,
            "n": rep.n, "t": rep.t, "branches": len(rep.branch_savings)}
    _emit(args, data, [f"replay ok: size {len(rep.red)}, saved {rep.saved}, "
                       f"7*{len(rep.red)} = 2*{rep.n} + {rep.t} - {rep.saved}"])
    return OK


def cmd_oracle(args):
    g = _load(args.file)
    try:
        res = min_transversal_exact(g, args.cap)
    except CapExceeded as exc:
        _emit(args, {"cap_exceeded": True, "cap": exc.cap}, [str(exc)])
        return CAP_EXCEEDED
    _emit(args, {"minimum": res.minimum_size, "witness": _ids(res.witness),
                 "explored": res.explored},
          [f"minimum {res.minimum_size}", f"witness {_fmt(res.witness)}"])
    return OK


def cmd_gen(args):
    if args.kind == "hk":
        if args.k is None or args.k < 0:
            raise UserError("gen hk needs --k >= 0")
        g = h_graph(args.k)
    elif args.kind in ("lower", "complete"):
        if args.n is None:
            raise UserError(f"gen {args.kind} needs --n")
        try:
            g = lower_bound_graph(args.n) if args.kind == "lower" else complete_graph(args.n)
        except ValueError as exc:
            raise UserError(str(exc)) from None
    else:
        if args.nodes < 1 or not 4 <= args.max_bag <= 12:
            raise UserError("gen random needs --nodes >= 1 and 4 <= --max-bag <= 12")
        g = random_four_chordal(args.seed, args.nodes, args.max_bag)
    sys.stdout.write(g.to_text())
    return OK


def fuzz_one(job):
    """Solve and replay one fuzz instance; returns (index, n, error or None)."""
    seed, index, nodes, max_n = job
    g = fuzz_graph(seed, index, max_n=max_n, max_nodes=nodes)
    try:
        r = solve(g)
        if not r.bound_ok:
            return index, g.n, f"size {r.size} above bound {bound(g.n)}"
        rep = replay_verify(r.trace, g)
        if not rep.ok:
            return index, g.n, f"replay: {rep.violation}"
        if r.t and (len(rep.branch_savings) < r.t + 2 or min(rep.branch_savings) < 1):
            return index, g.n, f"{len(rep.branch_savings)} saving branches for t={r.t}"
    except EngineError as exc:
        return index, g.n, f"{type(exc).__name__}: {exc}"
    return index, g.n, None


def cmd_fuzz(args):
    seed = args.seed
    if seed is None:
        try:
            seed = int(os.environ.get("CT_SEED", "0"))
        except ValueError:
            raise UserError("CT_SEED must be an integer") from None
    if args.count < 0 or args.workers < 1 or args.nodes < 1:
        raise UserError("--count must be >= 0, --workers and --nodes >= 1")
    jobs = [(seed, i, args.nodes, args.max_n) for i in range(args.count)]
    if args.workers > 1:
        with Pool(args.workers) as pool:
            results = pool.map(fuzz_one, jobs, chunksize=max(1, len(jobs) // (4 * args.workers)))
    else:
        results = [fuzz_one(j) for j in jobs]
    failures = [(i, n, err) for i, n, err in results if err is not None]
    passed = len(results) - len(failures)
    data = {"seed": seed, "count": args.count, "passed": passed,
            "failures": [{"index": i, "n": n, "error": e} for i, n, e in failures[:10]]}
    lines = [f"{passed}/{args.count} within bound"]
    if failures:
        i, n, err = failures[0]
        lines.append(f"first failure: seed {seed} index {i} (n={n}): {err}")
    _emit(args, data, lines)
    return OK if not failures else INTERNAL


# --- argument parsing


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ct", description="Clique transversals of 4-chordal graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, func, help, file=True):
        sp = sub.add_parser(name, help=help)
        if file:
            sp.add_argument("file", help="graph file ('p n m' header, 'e u v' lines)")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        sp.set_defaults(func=func)
        return sp

    cmd("check", cmd_check, "chordality, 4-chordality and the number of maximal 3-cliques")
    cmd("cliques", cmd_cliques, "list the maximal cliques of a chordal graph")
    sp = cmd("decompose", cmd_decompose, "nice tree-decomposition and its branches")
    sp.add_argument("--root", help="root clique, 1-indexed ids (default: smallest 3-clique)")
    sp = cmd("solve", cmd_solve, "compute a clique transversal within the bound")
    sp.add_argument("--trace", help="write the zloty trace (JSON lines) here")
    sp.add_argument("--mode", choices=MODES, default="auto", help="force a driver")
    sp = cmd("verify", cmd_verify, "check a vertex set or replay a trace")
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--set", help="1-indexed vertex ids, e.g. '1 4 9'")
    group.add_argument("--trace", help="trace file written by 'ct solve --trace'")
    sp = cmd("oracle", cmd_oracle, "exact minimum clique transversal")
    sp.add_argument("--cap", type=int, default=None, help="give up above this size")
    sp = cmd("gen", cmd_gen, "print a generated graph", file=False)
    sp.add_argument("kind", choices=("hk", "lower", "complete", "random"))
    sp.add_argument("--k", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--nodes", type=int, default=10)
    sp.add_argument("--max-bag", type=int, default=6)
    sp = cmd("fuzz", cmd_fuzz, "solve and replay a seeded random corpus", file=False)
    sp.add_argument("--seed", type=int, default=None, help="corpus seed (default: $CT_SEED or 0)")
    sp.add_argument("--count", type=int, default=1000)
    sp.add_argument("--nodes", type=int, default=16, help="largest number of bags per instance")
    sp.add_argument("--max-n", type=int, default=60, help="largest vertex count")
    sp.add_argument("--workers", type=int, default=1)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UserError as exc:
        print(f"ct: {exc}", file=sys.stderr)
        return USER_ERROR


if __name__ == "__main__":
    sys.exit(main())
