"""Command line front end.

    cryvol volume --family cry --n 4
    cryvol volume --family cryd --n 2 --method reduction
    cryvol count kdyn --graph fig2 --netflow 2,1,1
    cryvol verify thm-decomp --n 2 --format json
    cryvol ct "CT[x2,x1] x1^-1 * (1 - x1)^-2 * (x2 - x1)^-1"

Exit status: 0 when everything passes, 1 when a verification fails or a
computation is rejected, 2 on bad usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import ct, verify
from .dynflow import kdyn, volume_via_thm_volD
from .exact import format_number
from .graphs import SignedGraph, make_complete_C, make_family_graph, named_graph
from .kostant import EmptyPolytope, kpf, normalized_volume_ehrhart
from .reduce import volume_via_reduction

FAMILIES = ("cry", "cryd", "cryc", "cryc-first-n", "family-G")


class UsageError(Exception):
    pass


def parse_vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def load_graph(args) -> SignedGraph:
    if args.family and args.graph:
        raise UsageError("give either --family or --graph")
    if args.family:
        if args.family == "family-G":
            if not args.index:
                raise UsageError("family-G needs --index 0,a2,...")
            return make_family_graph(parse_vector(args.index))
        if args.n is None:
            raise UsageError(f"--family {args.family} needs --n")
        return named_graph(args.family, args.n)
    if args.graph:
        path = Path(args.graph)
        if path.suffix == ".json" or path.exists():
            return SignedGraph.from_json(path.read_text())
        try:
            return named_graph(args.graph, args.n)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    raise UsageError("a graph is required (--family or --graph)")


def default_netflow(args, G: SignedGraph) -> tuple[int, ...]:
    if args.netflow:
        a = parse_vector(args.netflow)
        if len(a) != G.size:
            raise UsageError(f"netflow has {len(a)} entries, graph has {G.size} vertices")
        return a
    if args.family == "cry":
        return (1,) + (0,) * (G.size - 2) + (-1,)
    return (2,) + (0,) * (G.size - 1)


def cmd_volume(args) -> int:
    G = load_graph(args)
    a = default_netflow(args, G)
    if args.method == "ehrhart":
        value = normalized_volume_ehrhart(G, a)
    elif args.method == "reduction":
        value = volume_via_reduction(G, a, node_budget=args.node_budget)
    else:
        if a != (2,) + (0,) * (G.size - 1):
            raise UsageError("the dynamic method only covers netflow (2,0,...,0)")
        if G.has_loops():
            if not args.cryc_pipeline:
                raise ValueError("graph has loops; the dynamic method needs a loopless graph "
                                 "(or --cryc-pipeline for the complete graph with all loops)")
            n = G.size - 1
            if G != make_complete_C(G.size):
                raise ValueError("--cryc-pipeline only applies to the complete graph with a loop at every vertex")
            value = kdyn(G, (0, 0) + tuple(range(1, n)))
        else:
            value = volume_via_thm_volD(G)
    print(format_number(value))
    return 0


def cmd_count(args) -> int:
    G = load_graph(args)
    if not args.netflow:
        raise UsageError("count needs --netflow")
    a = default_netflow(args, G)
    value = kpf(G, a) if args.kind == "kpf" else kdyn(G, a)
    print(value)
    return 0


def cmd_verify(args) -> int:
    reports = verify.run_suite(args.suite, args.n, jobs=args.jobs, count=args.count, seed=args.seed)
    if args.format == "json":
        print(verify.reports_to_json(reports))
    else:
        sys.stdout.write(verify.reports_to_tsv(reports))
    return 0 if all(r.status == "pass" for r in reports) else 1


def cmd_ct(args) -> int:
    try:
        expr = ct.parse_expression(args.expression)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    value = ct.iterated_ct_series(expr) if args.series else ct.iterated_ct(expr)
    print(format_number(value))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cryvol", description="Exact flow polytope volumes and identities.")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_args(sp):
        sp.add_argument("--family", choices=FAMILIES)
        sp.add_argument("--n", type=int)
        sp.add_argument("--index", help="index vector 0,a2,...,a_{n+1} for family-G")
        sp.add_argument("--graph", help="built-in name or path to a graph JSON file")
        sp.add_argument("--netflow", help="comma-separated netflow vector")

    v = sub.add_parser("volume", help="normalized volume of a flow polytope")
    graph_args(v)
    v.add_argument("--method", choices=("ehrhart", "reduction", "dynamic"), default="ehrhart")
    v.add_argument("--cryc-pipeline", action="store_true",
                   help="with --method dynamic on the complete graph with loops")
    v.add_argument("--node-budget", type=int, default=20000)
    v.set_defaults(func=cmd_volume)

    c = sub.add_parser("count", help="Kostant or dynamic Kostant partition function")
    c.add_argument("kind", choices=("kpf", "kdyn"))
    graph_args(c)
    c.set_defaults(func=cmd_count)

    r = sub.add_parser("verify", help="run a verification suite")
    r.add_argument("suite", choices=verify.SUITES + verify.EXTRA_SUITES + ("all",))
    r.add_argument("--n", type=int, help="largest size to check (suite-specific default)")
    r.add_argument("--format", choices=("json", "tsv"), default="tsv")
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--corpus", choices=("loopless",), default="loopless",
                   help="graph corpus for thm-volD")
    r.add_argument("--count", type=int, default=24, help="random graphs for thm-volD")
    r.add_argument("--seed", type=int, default=0)
    r.set_defaults(func=cmd_verify)

    e = sub.add_parser("ct", help="iterated constant term of an expression")
    e.add_argument("expression")
    e.add_argument("--series", action="store_true", help="use the truncated-series backend")
    e.set_defaults(func=cmd_ct)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, EmptyPolytope) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
