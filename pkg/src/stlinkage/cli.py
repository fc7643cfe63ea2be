"""Command line entry point.

Exit codes: 0 solution found, 3 infeasible, 2 usage error, 4 internal error.
Every solution is re-validated before printing and the seed is echoed in the
output document, so any run can be replayed exactly.
"""

from __future__ import annotations

import argparse
import json
import sys

from .graphs import validate_solution
from .io import (
    Instance,
    InstanceFormatError,
    InstanceSemanticError,
    load_instance,
    loads_instance,
    dumps_instance,
    solution_document,
)
from .solver import SolverConfig, RecoveryExhausted, solve

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_INTERNAL = 4


def _read_instance(path: str) -> Instance:
    if path == "-":
        return loads_instance(sys.stdin.read())
    return load_instance(path)


def _emit(doc: dict, fmt: str):
    if fmt == "json":
        print(json.dumps(doc, sort_keys=True))
        return
    for key in sorted(doc):
        val = doc[key]
        if isinstance(val, list) and val and isinstance(val[0], list):
            val = "; ".join(" ".join(str(x) for x in row) for row in val)
        elif isinstance(val, list):
            val = " ".join(str(x) for x in val)
        print(f"{key}: {val}")


def _config(args, seed_default=None) -> SolverConfig:
    return SolverConfig(
        trials_per_length=args.trials,
        recovery_trials=args.recovery_trials,
        seed=args.seed if args.seed is not None else seed_default,
        max_w=args.max_w,
        threads=args.threads,
    )


def _app_doc(res) -> dict:
    doc = {"feasible": res.feasible, "seed": res.seed, "trials_used": res.trials_used}
    if res.feasible:
        doc["total_length"] = res.total_length
        if res.paths:
            doc["paths"] = [list(p) for p in res.paths]
        if res.cycles:
            doc["cycles"] = [list(c) for c in res.cycles]
        if res.certificate:
            doc["certificate"] = sorted(res.certificate)
    if res.trace is not None:
        doc["reduction"] = {
            "construction": res.trace.construction,
            "length_offset": res.trace.length_offset,
            "back_map": res.trace.back_map,
        }
    return doc


def _finish_app(res, fmt: str) -> int:
    _emit(_app_doc(res), fmt)
    return EXIT_OK if res.feasible else EXIT_INFEASIBLE


def _parse_terminals(spec: str) -> list[int]:
    try:
        return [int(x) for x in spec.replace(",", " ").split()]
    except ValueError:
        raise InstanceFormatError(f"bad vertex list: {spec!r}")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="stlinkage", description=__doc__, allow_abbrev=False)
    top.add_argument("--seed", type=int, default=None, help="RNG seed (echoed in output)")
    top.add_argument("--trials", type=int, default=20, help="evaluations per length")
    top.add_argument("--recovery-trials", type=int, default=None)
    top.add_argument("--max-w", type=int, default=10**6)
    top.add_argument("--threads", type=int, default=None)
    top.add_argument("--format", choices=("json", "plain"), default="json")
    sub = top.add_subparsers(dest="command", required=True)

    def inst_cmd(name, help_):
        c = sub.add_parser(name, help=help_)
        c.add_argument("instance", help="instance file, or - for stdin")
        return c

    inst_cmd("solve", "minimum-length (k,w)-colored linkage for the instance query")
    f = inst_cmd("framework", "matroid-ranked variant (instance needs a matroid block)")
    f.add_argument("--rounds", type=int, default=20, help="truncation rounds")

    c = inst_cmd("longest-path", "shortest (s,t)-path with at least k vertices")
    c.add_argument("--source", type=int, required=True)
    c.add_argument("--target", type=int, required=True)
    c.add_argument("--k", type=int, required=True)

    c = inst_cmd("longest-cycle", "shortest cycle with at least k vertices")
    c.add_argument("--k", type=int, required=True)

    c = inst_cmd("t-cycle", "shortest cycle through all terminals")
    c.add_argument("--terminals", required=True, help="comma separated vertex ids")

    c = inst_cmd("longest-t-cycle", "shortest cycle through terminals with >= k vertices")
    c.add_argument("--terminals", required=True)
    c.add_argument("--k", type=int, required=True)

    c = inst_cmd("vrp-flower", "p depot cycles covering the terminals, min total length")
    c.add_argument("--depot", type=int, required=True)
    c.add_argument("--terminals", required=True)
    c.add_argument("--p", type=int, required=True)

    c = inst_cmd("vrp-profits", "p depot cycles with k deliveries of profit exactly w")
    c.add_argument("--depot", type=int, required=True)
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--w", type=int, required=True)

    c = inst_cmd("longest-k-colored", "min-length k-colored linkage of length >= l")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--min-length", type=int, required=True)

    inst_cmd("longest-linkage-det", "deterministic longest directed linkage (uses query)")

    c = sub.add_parser("oracle", help="brute-force reference answers (tiny instances only)")
    c.add_argument("op", choices=("min-linkage", "longest-digraph", "t-cycle"))
    c.add_argument("instance", help="instance file, or - for stdin")
    c.add_argument("--terminals", default=None)

    g = sub.add_parser("gen", help="emit a random instance document")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--avg-degree", type=float, default=2.1)
    g.add_argument("--colors", type=int, default=None)
    g.add_argument("--weight-min", type=int, default=1)
    g.add_argument("--weight-max", type=int, default=1)
    g.add_argument("--p", type=int, default=1)
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--w", type=int, default=None)
    g.add_argument("--directed", action="store_true")

    b = sub.add_parser("bench", help="runtime scaling report (CSV + figure)")
    b.add_argument("--n", type=int, default=40)
    b.add_argument("--k-values", default="14,15")
    b.add_argument("--layers", type=int, default=18)
    b.add_argument("--out-dir", default="reports")
    b.add_argument("--full-solve-k", type=int, default=None)
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return _dispatch(args)
    except (InstanceFormatError, InstanceSemanticError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RecoveryExhausted as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports, never raises
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def _dispatch(args) -> int:
    fmt = args.format
    cmd = args.command

    if cmd == "gen":
        from .generator import generate_instance, generate_digraph_instance

        seed = args.seed if args.seed is not None else 0
        if args.directed:
            inst = generate_digraph_instance(args.n, args.avg_degree, args.p, args.k, seed)
        else:
            inst = generate_instance(
                args.n, args.avg_degree, args.colors, (args.weight_min, args.weight_max),
                args.p, args.k, args.w, seed,
            )
        sys.stdout.write(dumps_instance(inst))
        return EXIT_OK

    if cmd == "bench":
        from .bench import run_bench

        k_values = tuple(int(x) for x in args.k_values.split(","))
        out = run_bench(args.n, k_values, args.layers, args.seed or 5, args.out_dir,
                        args.full_solve_k)
        for row in out["rows"] + out["ratios"]:
            _emit(row, fmt)
        print(f"wrote {out['csv']} and {out['figure']}", file=sys.stderr)
        return EXIT_OK

    inst = _read_instance(args.instance)

    if cmd == "solve":
        if inst.graph is None or inst.query is None:
            raise InstanceSemanticError("solve needs an undirected instance with a query")
        cfg = _config(args)
        res = solve(inst.graph, inst.query, cfg)
        doc = solution_document(res, res.seed)
        if res.solution is not None:
            ok, diags = validate_solution(inst.graph, inst.query, res.solution)
            if not ok:
                print(f"internal error: invalid solution: {diags}", file=sys.stderr)
                return EXIT_INTERNAL
        _emit(doc, fmt)
        return EXIT_OK if res.solution is not None else EXIT_INFEASIBLE

    if cmd == "framework":
        from .frameworks import solve_ranked

        matroid = inst.matroid or inst.transversal or inst.rational
        if inst.graph is None or inst.query is None or matroid is None:
            raise InstanceSemanticError("framework needs a graph, query, and matroid block")
        cfg = _config(args)
        res = solve_ranked(inst.graph, matroid, inst.query, cfg, rounds=args.rounds)
        doc = solution_document(res, res.seed)
        if res.solution is not None:
            ok, diags = validate_solution(inst.graph, inst.query, res.solution, matroid=matroid)
            if not ok:
                print(f"internal error: invalid solution: {diags}", file=sys.stderr)
                return EXIT_INTERNAL
        _emit(doc, fmt)
        return EXIT_OK if res.solution is not None else EXIT_INFEASIBLE

    if cmd == "longest-linkage-det":
        from .det_linkage import solve_longest_linkage, validate_digraph_linkage

        if inst.digraph is None or inst.query is None:
            raise InstanceSemanticError("longest-linkage-det needs a directed instance with a query")
        q = inst.query
        paths = solve_longest_linkage(inst.digraph, q.S, q.T, q.p, q.k)
        doc = {"feasible": paths is not None, "seed": args.seed or 0, "trials_used": 0}
        if paths is not None:
            ok, diags = validate_digraph_linkage(inst.digraph, q.S, q.T, q.p, q.k, paths)
            if not ok:
                print(f"internal error: invalid linkage: {diags}", file=sys.stderr)
                return EXIT_INTERNAL
            doc["paths"] = [list(p) for p in paths]
            doc["total_length"] = sum(len(p) for p in paths)
        _emit(doc, fmt)
        return EXIT_OK if paths is not None else EXIT_INFEASIBLE

    if cmd == "oracle":
        from . import oracle

        if args.op == "min-linkage":
            if inst.graph is None or inst.query is None:
                raise InstanceSemanticError("oracle min-linkage needs a graph and query")
            best = oracle.min_colored_linkage(inst.graph, inst.query)
            doc = {"feasible": best is not None}
            if best is not None:
                doc["total_length"] = best[0]
                doc["witness_count"] = len(best[1])
            _emit(doc, fmt)
            return EXIT_OK if best is not None else EXIT_INFEASIBLE
        if args.op == "longest-digraph":
            if inst.digraph is None or inst.query is None:
                raise InstanceSemanticError("oracle longest-digraph needs a directed instance")
            q = inst.query
            best = oracle.longest_linkage_digraph(inst.digraph, q.S, q.T, q.p)
            doc = {"feasible": best is not None}
            if best is not None:
                doc["total_length"] = best[0]
                doc["paths"] = [list(p) for p in best[1]]
            _emit(doc, fmt)
            return EXIT_OK if best is not None else EXIT_INFEASIBLE
        if args.op == "t-cycle":
            if inst.graph is None or args.terminals is None:
                raise InstanceSemanticError("oracle t-cycle needs a graph and --terminals")
            best = oracle.min_t_cycle(inst.graph, _parse_terminals(args.terminals))
            doc = {"feasible": best is not None}
            if best is not None:
                doc["total_length"] = best[0]
                doc["cycles"] = [list(best[1])]
            _emit(doc, fmt)
            return EXIT_OK if best is not None else EXIT_INFEASIBLE

    from . import reductions

    if inst.graph is None:
        raise InstanceSemanticError(f"{cmd} needs an undirected instance")
    cfg = _config(args)
    if cmd == "longest-path":
        return _finish_app(reductions.longest_st_path(inst.graph, args.source, args.target, args.k, cfg), fmt)
    if cmd == "longest-cycle":
        return _finish_app(reductions.longest_cycle(inst.graph, args.k, cfg), fmt)
    if cmd == "t-cycle":
        return _finish_app(reductions.t_cycle(inst.graph, _parse_terminals(args.terminals), cfg), fmt)
    if cmd == "longest-t-cycle":
        return _finish_app(
            reductions.longest_t_cycle(inst.graph, _parse_terminals(args.terminals), args.k, cfg), fmt
        )
    if cmd == "vrp-flower":
        return _finish_app(
            reductions.vrp_flower(inst.graph, args.depot, _parse_terminals(args.terminals), args.p, cfg),
            fmt,
        )
    if cmd == "vrp-profits":
        return _finish_app(
            reductions.vrp_profits(inst.graph, args.depot, args.p, args.k, args.w, cfg), fmt
        )
    if cmd == "longest-k-colored":
        q = inst.query
        if q is None:
            raise InstanceSemanticError("longest-k-colored reads S, T, p from the query block")
        return _finish_app(
            reductions.longest_k_colored_linkage(
                inst.graph, q.S, q.T, q.p, args.k, args.min_length, cfg
            ),
            fmt,
        )
    raise InstanceFormatError(f"unknown command {cmd!r}")


if __name__ == "__main__":
    sys.exit(main())
