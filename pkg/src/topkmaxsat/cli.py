"""Command line: encode, solve, generate, verify, bench.

Exit codes: 0 success, 1 usage/parse error, 2 hard clauses unsatisfiable,
3 timeout, 4 verification mismatch.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import apps
from .bench import format_table, run_bench
from .core import TopKInstance, WCNFError, parse_wcnf, write_wcnf
from .ee import ee_encode
from .gen import RandomInstanceParams, gen_random_graph, gen_random_instance
from .memkc import EnumerationOverflow
from .oracle import DEFAULT_CAP, OracleCapError, brute_topk
from .solve import METHODS, Problem, load_problem_file, report_dict, report_text, solve_topk

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_TIMEOUT, EXIT_MISMATCH = range(5)


def _kind(args) -> str:
    if getattr(args, "from_graph", False):
        return "graph"
    if getattr(args, "from_ca", False):
        return "ca"
    return "wcnf"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_encode(args) -> int:
    src = Path(args.input).read_text()
    comments: list[str] = []
    if args.kind == "ee":
        formula, vm = ee_encode(TopKInstance(parse_wcnf(src), args.k))
        comments = [f"k {args.k}", *vm.comments()]
    else:
        if args.kind == "clique":
            inst = apps.encode_clique(apps.parse_dimacs_graph(src), args.k)
        else:
            inst = apps.encode_ca(apps.parse_ca_spec(src), args.k)
        formula = inst.formula
        comments = [f"k {args.k}"]
        if args.ee:
            formula, vm = ee_encode(inst)
            comments += vm.comments()
    _emit(write_wcnf(formula, comments), args.output)
    summary = f"vars {formula.num_vars} hard {formula.m} soft {formula.m_soft}"
    print(summary, file=sys.stderr if not args.output else sys.stdout)
    return EXIT_OK


def _solve_and_report(problem: Problem, args) -> int:
    out = solve_topk(
        problem, args.k, args.method,
        maximalize=args.maximalize, time_limit=args.time_limit,
        solver_cmd=args.solver_cmd, cap=args.cap,
    )
    d = report_dict(problem, out)
    sys.stdout.write(json.dumps(d) + "\n" if args.json else report_text(d))
    sol = out.solution
    if sol.status == "infeasible-hard":
        return EXIT_INFEASIBLE
    if sol.status == "unknown":
        return EXIT_TIMEOUT
    if not sol.verify(problem.formula):
        print("error: reported solution fails re-verification", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_solve(args) -> int:
    problem = load_problem_file(args.input, _kind(args))
    return _solve_and_report(problem, args)


def cmd_generate(args) -> int:
    if args.what == "instance":
        f = gen_random_instance(RandomInstanceParams(args.n, args.hard, args.len, args.seed))
        _emit(write_wcnf(f, [f"seed {args.seed}"]), args.output)
    else:
        g = gen_random_graph(args.n, args.p, args.seed)
        _emit(apps.write_dimacs_graph(g), args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    problem = load_problem_file(args.input, _kind(args))
    if problem.formula.num_vars > args.cap:
        raise OracleCapError(f"{problem.formula.num_vars} variables exceed oracle cap {args.cap}")
    oracle = brute_topk(problem.instance(args.k), cap=args.cap).objective
    memkc = solve_topk(problem, args.k, "memkc").solution.objective
    ee = solve_topk(problem, args.k, "ee-internal").solution.objective
    ok = oracle == memkc == ee
    print(f"memkc {memkc}\nee-internal {ee}\noracle {oracle}\n{'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_bench(args) -> int:
    header, rows = run_bench(args.manifest, workers=args.workers)
    sys.stdout.write(format_table(header, rows, as_csv=args.csv))
    return EXIT_OK


def _add_input_kind(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--from-graph", action="store_true", help="input is a DIMACS edge graph (top-k clique)")
    g.add_argument("--from-ca", action="store_true", help="input is a CA spec line 'M t s_1 .. s_M [N]'")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="topkmaxsat", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="write a WCNF encoding")
    p.add_argument("kind", choices=("ee", "clique", "ca"))
    p.add_argument("input")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--ee", action="store_true", help="also apply the expanding encoding (clique/ca)")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("solve", help="solve a diversified top-k instance")
    p.add_argument("method", choices=METHODS)
    p.add_argument("input")
    p.add_argument("--k", type=int, required=True)
    _add_input_kind(p)
    p.add_argument("--maximalize", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--time-limit", type=float)
    p.add_argument("--solver-cmd", help="external solver argv template with {wcnf}; default $TOPKMAXSAT_SOLVER")
    p.add_argument("--cap", type=int, default=10**6, help="model enumeration cap for memkc")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("generate", help="seeded random instances")
    gsub = p.add_subparsers(dest="what", required=True)
    gi = gsub.add_parser("instance")
    gi.add_argument("--n", type=int, required=True)
    gi.add_argument("--hard", type=int, required=True)
    gi.add_argument("--len", type=int, default=3)
    gi.add_argument("--seed", type=int, default=0)
    gi.add_argument("-o", "--output")
    gg = gsub.add_parser("graph")
    gg.add_argument("--n", type=int, required=True)
    gg.add_argument("--p", type=float, required=True)
    gg.add_argument("--seed", type=int, default=0)
    gg.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="cross-check memkc, ee-internal and brute force")
    p.add_argument("input")
    p.add_argument("--k", type=int, required=True)
    _add_input_kind(p)
    p.add_argument("--cap", type=int, default=DEFAULT_CAP)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="run a benchmark manifest")
    p.add_argument("manifest")
    p.add_argument("--workers", type=int)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "k", None) is not None and args.k < 1:
        parser.error("--k must be a positive integer")
    try:
        return args.func(args)
    except (WCNFError, OracleCapError, EnumerationOverflow, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
