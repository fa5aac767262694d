"""Command-line front end.

Exit codes: 0 success or claim verified, 1 claim refuted or infeasible,
2 usage or input error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import reference
from .bounds import lower_bound
from .graph import BudgetExceeded, GraphError, enumerate_avoiding_rows, load_graph, serialize_graph, solitary_pairs
from .search import SearchConfig, default_max_nodes, enumerate_cafes, exists_cafe, minimal_N
from .symmetry import (
    arrays_isomorphic,
    automorphism_group,
    canonical_form,
    is_arc_transitive,
    is_vertex_transitive,
)
from .verify import ArrayError, is_cafe, load_array, serialize_array, uniformity

OK, REFUTED, USAGE, BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE)


def _pair(p) -> str:
    return f"{p.a.column} {p.a.symbol} {p.b.column} {p.b.symbol}"


def cmd_validate(args) -> int:
    g = load_graph(args.graph)
    print(f"valid k={g.k} v={g.v} t={g.t} edges={len(g.edges)}")
    print(serialize_graph(g), end="")
    return OK


def cmd_rows(args) -> int:
    g = load_graph(args.graph)
    rows = enumerate_avoiding_rows(g)
    print(f"avoiding rows: {len(rows)}")
    for r in rows:
        print(" ".join(map(str, r)))
    return OK


def cmd_solitary(args) -> int:
    g = load_graph(args.graph)
    pairs = solitary_pairs(g)
    print(f"solitary pairs: {len(pairs)}")
    for p in pairs:
        print(_pair(p))
    return OK


def cmd_aut(args) -> int:
    g = load_graph(args.graph)
    grp = automorphism_group(g)
    print(f"order: {grp.order}")
    print(f"arc-transitive: {'yes' if is_arc_transitive(g, grp) else 'no'}")
    print(f"vertex-transitive: {'yes' if is_vertex_transitive(g, grp) else 'no'}")
    for s in grp.generators:
        print(f"generator {s.cycles()}")
        print(f"  {s.machine()}")
    if args.elements:
        for e in grp:
            print(f"element {e.machine()}")
    return OK


def cmd_bound(args) -> int:
    g = load_graph(args.graph)
    cert = lower_bound(g)
    print(cert.serialize(), end="")
    return REFUTED if cert.infeasible else OK


def cmd_verify(args) -> int:
    g = load_graph(args.graph)
    a = load_array(args.array)
    ok, report = is_cafe(a, g)
    print(f"N={a.N} k={a.k} v={a.v}")
    print(f"coverage gaps: {len(report.gaps)}")
    for p in report.gaps:
        print(f"  gap {_pair(p)}")
    print(f"avoidance violations: {len(report.violations)}")
    for n, e in report.violations:
        print(f"  row {n} hits edge {_pair(e)}")
    print(uniformity(a).format())
    print(f"cafe: {'yes' if ok else 'no'}")
    return OK if ok else REFUTED


def cmd_uniformity(args) -> int:
    print(uniformity(load_array(args.array)).format())
    return OK


def cmd_canon(args) -> int:
    g = load_graph(args.graph)
    a = load_array(args.array)
    print(serialize_array(canonical_form(a, automorphism_group(g))), end="")
    return OK


def cmd_isomorphic(args) -> int:
    g = load_graph(args.graph)
    a, b = load_array(args.array_a), load_array(args.array_b)
    iso, wit = arrays_isomorphic(a, b, automorphism_group(g))
    print(f"isomorphic: {'yes' if iso else 'no'}")
    if wit is not None:
        print(f"element {wit.element.cycles()}")
        print(f"  {wit.element.machine()}")
        print(f"row-map {' '.join(map(str, wit.row_perm))}")
    return OK if iso else REFUTED


def cmd_search(args) -> int:
    g = load_graph(args.graph)
    cfg = SearchConfig(max_nodes=args.max_nodes, reduce_by_group=not args.no_symmetry)
    out_dir = Path(args.out_dir) if args.out_dir else None
    if args.minimal:
        cert = minimal_N(g, cfg)
        if out_dir is not None and cert.realizing_array is not None:
            out_dir.mkdir(parents=True, exist_ok=True)
            path = out_dir / "minimal.array"
            path.write_text(serialize_array(cert.realizing_array), encoding="utf-8")
            cert.array_file = str(path)
        if cert.realizing_array is not None:
            print(f"minimal N {cert.realizing_array.N}")
        print(cert.serialize(), end="")
        if cert.infeasible:
            return REFUTED
        return OK if cert.complete else BUDGET
    if args.N is None:
        raise _UsageError("N is required unless --minimal is given")
    if args.N < 1:
        raise _UsageError("N must be >= 1")
    if args.first:
        found, res = exists_cafe(g, args.N, cfg)
        solutions = [found] if found is not None else []
        summary = f"found {'yes' if found is not None else 'no'} nodes {res.nodes_expanded} exhausted {str(res.exhausted).lower()}"
    else:
        res = enumerate_cafes(g, args.N, cfg)
        solutions = res.canonical_solutions
        summary = res.summary()
    if res.infeasible:
        print("infeasible: some required pair lies in no avoiding row")
    print(summary)
    for n, a in enumerate(solutions):
        if out_dir is not None:
            out_dir.mkdir(parents=True, exist_ok=True)
            (out_dir / f"solution-{n:04d}.array").write_text(serialize_array(a), encoding="utf-8")
        else:
            print(f"# solution {n}")
            print(serialize_array(a), end="")
    if solutions:
        return OK
    return REFUTED if res.exhausted else BUDGET


def cmd_analyze(args) -> int:
    g = load_graph(args.graph)
    rows = enumerate_avoiding_rows(g)
    sol = solitary_pairs(g)
    print(f"k={g.k} v={g.v} t={g.t}")
    print(f"edges: {len(g.edges)}")
    print(f"avoiding rows: {len(rows)}")
    print(f"solitary pairs: {len(sol)}")
    for p in sol:
        print(f"  {_pair(p)}")
    grp = automorphism_group(g)
    print(f"automorphism group order: {grp.order}")
    print(f"arc-transitive: {'yes' if is_arc_transitive(g, grp) else 'no'}")
    print(f"vertex-transitive: {'yes' if is_vertex_transitive(g, grp) else 'no'}")
    cert = lower_bound(g, rows)
    print(cert.serialize(), end="")
    return OK


def cmd_reproduce_paper(args=None, reference_rows=None, g1=None, g2=None) -> int:
    items = reference.reproduce(reference_rows=reference_rows, g1=g1, g2=g2)
    for it in items:
        print(it.line())
    failed = [it for it in items if not it.passed]
    if failed:
        print(f"first failed item: ({failed[0].number}) {failed[0].title}", file=sys.stderr)
        return REFUTED
    print("all checks passed")
    return OK


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cafe", description="Covering arrays avoiding forbidden edges.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def graph_cmd(name, func, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("graph")
        sp.set_defaults(func=func)
        return sp

    graph_cmd("validate", cmd_validate, "parse and normalise a graph file")
    graph_cmd("rows", cmd_rows, "list avoiding rows")
    graph_cmd("solitary", cmd_solitary, "list solitary pairs")
    graph_cmd("aut", cmd_aut, "automorphism group").add_argument(
        "--elements", action="store_true", help="print every element")
    graph_cmd("bound", cmd_bound, "incompatibility lower bound certificate")
    graph_cmd("verify", cmd_verify, "check an array against a graph").add_argument("array")
    graph_cmd("canon", cmd_canon, "canonical form of an array").add_argument("array")
    sp = graph_cmd("isomorphic", cmd_isomorphic, "test two arrays for isomorphism")
    sp.add_argument("array_a")
    sp.add_argument("array_b")
    graph_cmd("analyze", cmd_analyze, "summary of a graph")

    sp = sub.add_parser("uniformity", help="per-column symbol counts")
    sp.add_argument("array")
    sp.set_defaults(func=cmd_uniformity)

    sp = graph_cmd("search", cmd_search, "enumerate CAFEs")
    sp.add_argument("N", nargs="?", type=int)
    mode = sp.add_mutually_exclusive_group()
    mode.add_argument("--all", action="store_true", help="all isomorphism classes (default)")
    mode.add_argument("--first", action="store_true", help="stop at the first solution")
    mode.add_argument("--minimal", action="store_true", help="smallest N with a certificate")
    sp.add_argument("--no-symmetry", action="store_true", help="skip isomorph rejection")
    sp.add_argument("--max-nodes", type=int, default=None)
    sp.add_argument("--out-dir", help="write solution array files here")

    sp = sub.add_parser("reproduce-paper", help="run the ten-item checklist on the built-in instance")
    sp.set_defaults(func=cmd_reproduce_paper)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE
    if getattr(args, "max_nodes", 1) is None:
        args.max_nodes = default_max_nodes()
    try:
        return args.func(args)
    except (GraphError, ArrayError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return BUDGET
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
