"""Command-line interface.

Exit status is the machine contract: 0 affirmative, 1 negative (with a
certificate or witness in the document), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .critical import is_h_critical
from .degrees import (
    FSpec,
    HAssignment,
    family_member,
    h_family,
    jf_assignment,
    jf_plus_assignment,
)
from .factor import brute_force_h_factor, solve_h_factor, verify_factor
from .graph import (
    Multigraph,
    check_vertex_set,
    components,
    emit_dot,
    odd_component_sets,
    parse_edge_list,
    parse_graph6,
)
from .matching import max_matching
from .sweep import ConfigError, SweepConfig, run_sweep
from .tutte import check_tutte, sufficiency_h, worst_deficiency

OK, NEGATIVE, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(ERROR)


# -- argument helpers ---------------------------------------------------------------


def _graph_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph6", metavar="STR", help="inline graph6 string")
    src.add_argument("--graph6-file", metavar="PATH", help="file holding one graph6 line")
    src.add_argument("--edges", metavar="PATH", help="edge-list file ('-' for stdin)")


def _common(p: argparse.ArgumentParser, *, dot: bool = False) -> None:
    choices = ["json", "text", "dot"] if dot else ["json", "text"]
    p.add_argument("--output", choices=choices, default="json")
    p.add_argument("--seed", type=int, default=0, help="seed for any randomness (default 0)")
    p.add_argument("--family-cap", type=int, default=None, help="override GF_FAMILY_CAP")
    p.add_argument("--branch-cap", type=int, default=None, help="override GF_BRANCH_CAP")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def load_graph(args) -> Multigraph:
    if args.graph6 is not None:
        return parse_graph6(args.graph6)
    if args.graph6_file is not None:
        lines = [ln for ln in _read(args.graph6_file).splitlines() if ln.strip()]
        if len(lines) != 1:
            raise UsageError(f"{args.graph6_file}: expected exactly one graph6 line, got {len(lines)}")
        return parse_graph6(lines[0])
    return parse_edge_list(_read(args.edges))


def _f(args, g: Multigraph) -> FSpec:
    if args.f is None:
        raise UsageError("--f is required")
    return FSpec.parse(args.f, g.n)


def _vertex_list(text: str | None, g: Multigraph) -> tuple[int, ...]:
    if text is None or not text.strip():
        return ()
    try:
        vertices = [int(t) for t in text.split(",")]
    except ValueError:
        raise UsageError(f"bad vertex list {text!r}") from None
    return check_vertex_set(g, vertices)


def resolve_h(args, g: Multigraph) -> HAssignment:
    sel = args.h
    if sel.startswith("explicit:"):
        h = HAssignment.parse(sel[len("explicit:"):])
        if len(h) != g.n:
            raise UsageError(f"explicit assignment has {len(h)} sets for {g.n} vertices")
        return h
    f = _f(args, g)
    if sel == "jf":
        return jf_assignment(f)
    if sel == "jfplus":
        return jf_plus_assignment(f)
    if sel.startswith("family-index:"):
        try:
            index = int(sel[len("family-index:"):])
        except ValueError:
            raise UsageError(f"bad family index in {sel!r}") from None
        try:
            return family_member(f, index)
        except IndexError as exc:
            raise UsageError(str(exc)) from None
    if sel == "sufficiency":
        S = _vertex_list(args.S, g)
        if not S:
            raise UsageError("--h sufficiency needs a nonempty --S")
        return sufficiency_h(f, S)
    raise UsageError(f"unknown H selector {sel!r}")


def _emit(args, doc: dict, text: str) -> None:
    if args.output == "json":
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _fmt_set(vs) -> str:
    return "{" + ",".join(map(str, vs)) + "}"


# -- subcommands --------------------------------------------------------------------


def cmd_check_tutte(args) -> int:
    g = load_graph(args)
    f = _f(args, g)
    verdict = check_tutte(g, f)
    if verdict.holds:
        text = f"holds ({verdict.subsets_checked} subsets checked)"
    else:
        v = verdict.violation
        text = f"violated: S = {_fmt_set(v.S)}, o(G-S) = {v.odd} > f(S) = {v.f_sum}"
    _emit(args, verdict.to_json(), text)
    return OK if verdict.holds else NEGATIVE


def cmd_deficiency(args) -> int:
    g = load_graph(args)
    f = _f(args, g)
    S, value = worst_deficiency(g, f)
    _emit(args, {"S": list(S), "value": value}, f"deficiency {value} at S = {_fmt_set(S)}")
    return OK if value <= 0 else NEGATIVE


def cmd_factor(args) -> int:
    g = load_graph(args)
    h = resolve_h(args, g)
    if args.oracle:
        cert = brute_force_h_factor(g, h)
        doc = {"found": cert is not None, "solver": "brute-force"}
        if cert is None:
            doc["reason"] = "exhaustive-search"
    else:
        result = solve_h_factor(g, h, args.branch_cap)
        cert = result.certificate
        doc = {"found": cert is not None, "solver": "gadget", "branches": result.branches}
        if cert is None:
            doc["reason"] = result.reason
            if result.vertex is not None:
                doc["vertex"] = result.vertex
        else:
            doc["branch"] = result.branch
    doc["assignment"] = h.display()
    if cert is not None:
        if args.verify and not verify_factor(g, h, cert):
            raise UsageError("certificate failed verification")
        doc["certificate"] = cert.to_json(h)
        if args.verify:
            doc["verified"] = True
    if args.output == "dot":
        if cert is None:
            print("no factor", file=sys.stderr)
            return NEGATIVE
        sys.stdout.write(emit_dot(Multigraph.from_edges(g.n, [(u, v) for u, v, _ in cert.edges])))
        return OK
    if cert is None:
        text = f"no H-factor ({doc['reason']})"
    else:
        text = "factor edges: " + " ".join(f"{u}-{v}" for u, v, _ in cert.edges)
        text += "\ndegrees: " + " ".join(map(str, cert.degrees))
    _emit(args, doc, text)
    return OK if cert is not None else NEGATIVE


def cmd_critical(args) -> int:
    g = load_graph(args)
    h = resolve_h(args, g)
    cap = args.branch_cap

    def find(graph, assignment):
        return solve_h_factor(graph, assignment, cap).certificate

    report = is_h_critical(g, h, fast=args.fast, find=find)
    if report.is_critical:
        text = "H-critical"
    elif report.has_factor:
        text = "not critical: G has an H-factor"
    else:
        missing = [x for x, c in sorted(report.per_vertex.items()) if c is None]
        text = f"not critical: no H^x-factor for x in {_fmt_set(missing)}"
    _emit(args, report.to_json(h), text)
    return OK if report.is_critical else NEGATIVE


def cmd_family(args) -> int:
    g = load_graph(args)
    f = _f(args, g)
    family = h_family(f, args.family_cap)
    doc = {"size": len(family), "members": [h.display() for h in family]}
    text = "\n".join(f"{i}: " + " ".join(h.display()) for i, h in enumerate(family))
    _emit(args, doc, text)
    return OK


def cmd_inspect(args) -> int:
    g = load_graph(args)
    S = _vertex_list(args.S, g)
    odd = odd_component_sets(g, S)
    doc = {
        "n": g.n,
        "edges": [list(e) for e in g.edges],
        "degrees": list(g.degrees),
        "components": [list(c) for c in components(g)],
        "S": list(S),
        "odd_components": len(odd),
        "odd_component_sets": [list(c) for c in odd],
    }
    text = (
        f"n = {g.n}, total multiplicity {g.total_multiplicity}\n"
        f"degrees: {' '.join(map(str, g.degrees))}\n"
        f"components: {' '.join(_fmt_set(c) for c in components(g))}\n"
        f"o(G-{_fmt_set(S)}) = {len(odd)}"
    )
    _emit(args, doc, text)
    return OK


def cmd_match(args) -> int:
    g = load_graph(args)
    m = max_matching(g)
    perfect = 2 * m.size == g.n
    doc = {"size": m.size, "perfect": perfect, "edges": m.to_json()}
    _emit(args, doc, f"maximum matching size {m.size}" + (" (perfect)" if perfect else ""))
    return OK if perfect else NEGATIVE


def cmd_dot(args) -> int:
    sys.stdout.write(emit_dot(load_graph(args)))
    return OK


_SWEEP_FLAGS = (
    "n", "f", "thm", "source", "multigraphs", "multigraph_extra", "multigraph_loops",
    "crosscheck_limit", "family_cap", "branch_cap", "coloring_max_n", "jobs", "seed",
)


def sweep_config_from_args(args) -> SweepConfig:
    items: dict[str, str] = {}
    if args.config:
        text = _read(args.config)
        base = SweepConfig.from_text(text)
    else:
        base = SweepConfig()
    for key in _SWEEP_FLAGS:
        value = getattr(args, key, None)
        if value is not None:
            items[key] = str(value)
    if args.sample:
        items["sample"] = ",".join(args.sample)
    if args.no_internal:
        items["internal"] = "false"
    return SweepConfig.from_mapping(items, base)


def cmd_sweep(args) -> int:
    config = sweep_config_from_args(args)
    report = run_sweep(config)
    if args.output == "json":
        sys.stdout.write(report.dumps(include_timing=args.timing))
    else:
        lines = [f"graphs: {report.graphs}"]
        for thm, c in report.counts.items():
            lines.append(
                f"{thm}: {c['instances']} instances, {c['agree']} agree, "
                f"{c['skipped']} skipped, {c['refused']} refused"
            )
        lines.append(f"discrepancies: {len(report.discrepancies)}")
        lines.append(f"refusals: {len(report.refusals)}")
        if args.timing:
            lines.append(f"wall clock: {report.wall_clock:.2f}s")
        sys.stdout.write("\n".join(lines) + "\n")
    return OK if report.clean else NEGATIVE


# -- parser -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphfactors", description="Graph factors and the Tutte condition.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def graph_cmd(name, func, help_text, *, f=False, h=False, S=False, dot=False):
        p = sub.add_parser(name, help=help_text)
        _graph_args(p)
        _common(p, dot=dot)
        if f or h:
            p.add_argument("--f", help='f-spec: "1,2,3" or "const:k"')
        if h:
            p.add_argument(
                "--h",
                default="jf",
                help="jf | jfplus | family-index:i | sufficiency | explicit:'{1};{1,3};...'",
            )
        if S or h:
            p.add_argument("--S", help="comma-separated vertex set")
        p.set_defaults(func=func)
        return p

    graph_cmd("check-tutte", cmd_check_tutte, "decide o(G-S) <= f(S) for all nonempty S", f=True)
    graph_cmd("deficiency", cmd_deficiency, "maximise o(G-S) - f(S)", f=True)
    p = graph_cmd("factor", cmd_factor, "find an H-factor", h=True, dot=True)
    p.add_argument("--verify", action="store_true", help="re-check the certificate before output")
    p.add_argument("--oracle", action="store_true", help="use exhaustive search instead")
    p = graph_cmd("critical", cmd_critical, "decide H-criticality", h=True)
    p.add_argument("--fast", action="store_true", help="stop at the first disqualifying answer")
    graph_cmd("family", cmd_family, "list the members of H_f", f=True)
    graph_cmd("inspect", cmd_inspect, "degrees, components and o(G-S)", S=True)
    graph_cmd("match", cmd_match, "maximum matching")
    p = sub.add_parser("dot", help="emit Graphviz DOT")
    _graph_args(p)
    p.set_defaults(func=cmd_dot)

    p = sub.add_parser("sweep", help="check theorems over many graphs")
    p.add_argument("--config", metavar="PATH", help="flat key = value sweep configuration")
    p.add_argument("--n", help='vertex counts, e.g. "2..6" or "3,5"')
    p.add_argument("--f", help='f patterns, e.g. "const:1,random:7"')
    p.add_argument("--thm", help="comma-separated theorem ids")
    p.add_argument("--sample", action="append", metavar="N:COUNT", help="sample COUNT graphs at N")
    p.add_argument("--source", choices=["connected", "multigraph"])
    p.add_argument("--multigraphs", type=int, help="multigraphs per n for --source multigraph")
    p.add_argument("--multigraph-extra", type=int)
    p.add_argument("--multigraph-loops", type=int)
    p.add_argument("--crosscheck-limit", type=int)
    p.add_argument("--coloring-max-n", type=int)
    p.add_argument("--no-internal", action="store_true", help="skip proof-direction checks")
    p.add_argument("--jobs", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--family-cap", type=int)
    p.add_argument("--branch-cap", type=int)
    p.add_argument("--timing", action="store_true", help="include wall-clock time")
    p.add_argument("--output", choices=["json", "text"], default="json")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ERROR if exc.code not in (0, None) else OK
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"graphfactors: config error: {exc}", file=sys.stderr)
    except (UsageError, OSError) as exc:
        print(f"graphfactors: {exc}", file=sys.stderr)
    except Exception as exc:  # keep the exit-code contract for anything unexpected
        print(f"graphfactors: {type(exc).__name__}: {exc}", file=sys.stderr)
    return ERROR


if __name__ == "__main__":
    sys.exit(main())
