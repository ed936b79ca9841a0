"""``ddi`` command-line entry point."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .analyzer import (
    DEFAULT_CLOSURE_CAP, dependence_closure, find_dependences, parallelizability_report,
    report_dict,
)
from .errors import DdiError
from .expander import DEFAULT_UNROLL_CAP, expand_loops
from .frontend import SourceProgram, parse_program
from .graph import build_graph, to_adjacency_matrix, to_dot
from .printer import pretty_print
from .transforms import (
    TransformReport, detect_induction_variables, eliminate_dead_code,
    propagate_constants, propagate_constants_fixpoint,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_ERROR = 0, 1, 2, 3

_COLORS = {"flow": "31", "anti": "33", "output": "35", "input": "36"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive: {value}")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ddi", description="Data dependence analysis over a mini C-like language.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    def common(sp, path_required=True):
        if path_required:
            sp.add_argument("path", help="source file, or - for standard input")
        sp.add_argument("--unroll-cap", type=_positive, default=DEFAULT_UNROLL_CAP, metavar="N",
                        help="maximum unrolled instances (default %(default)s)")
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    g = sub.add_parser("graph", help="emit the dependence graph")
    common(g)
    fmt = g.add_mutually_exclusive_group()
    fmt.add_argument("--dot", action="store_true", help="graphviz DOT")
    fmt.add_argument("--matrix", action="store_true", help="adjacency matrix table")

    d = sub.add_parser("deps", help="dependences and loop parallelizability")
    common(d)
    d.add_argument("--closure", action="store_true", help="also list path-closure pairs")
    d.add_argument("--closure-cap", type=_positive, default=DEFAULT_CLOSURE_CAP, metavar="N")

    t = sub.add_parser("transform", help="dead code, constants, induction variables")
    common(t)
    t.add_argument("--dce", action="store_true", help="dead-code elimination")
    t.add_argument("--cp", action="store_true", help="constant propagation")
    t.add_argument("--cp-iterate", action="store_true", help="repeat constant propagation to a fixpoint")
    t.add_argument("--ivd", action="store_true", help="induction-variable detection")

    v = sub.add_parser("verify", help="compare the analyzer with the brute-force oracle")
    common(v, path_required=False)
    v.add_argument("path", nargs="?", help="source file, or - for standard input")
    v.add_argument("--random", type=_positive, metavar="N", help="check N generated programs")
    v.add_argument("--seed", type=int, default=0, metavar="S")

    f = sub.add_parser("fmt", help="pretty-print a program")
    f.add_argument("path", help="source file, or - for standard input")
    f.add_argument("--indices", action="store_true", help="annotate instruction indices")
    return p


def _load(path: str):
    if path == "-":
        return parse_program(SourceProgram(sys.stdin.read(), "<stdin>"))
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}")
    return parse_program(SourceProgram(text, path))


def _color_enabled() -> bool:
    env = os.environ.get("DDI_COLOR")
    if env is not None:
        return env == "1"
    return sys.stdout.isatty()


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def cmd_graph(args, out) -> int:
    g = build_graph(expand_loops(_load(args.path), args.unroll_cap))
    if args.json:
        out.write(g.to_json() + "\n")
    elif args.dot:
        out.write(to_dot(g))
    elif args.matrix:
        out.write(to_adjacency_matrix(g).render())
    else:
        for e in sorted(g.edges, key=lambda e: (e.label.seq, e.src, e.dst)):
            style = " (dashed)" if e.dashed else ""
            out.write(f"{e.src} -> {e.dst} [{e.label}]{style}\n")
    return EXIT_OK


def cmd_deps(args, out) -> int:
    xp = expand_loops(_load(args.path), args.unroll_cap)
    g = build_graph(xp)
    deps = find_dependences(g)
    verdicts = parallelizability_report(deps, xp.loops)
    closure = dependence_closure(g, args.closure_cap) if args.closure else None
    if args.json:
        data = report_dict(deps, verdicts)
        if closure is not None:
            data["closure"] = [[str(a), str(b)] for a, b in closure]
        out.write(_dump(data) + "\n")
        return EXIT_OK
    color = _color_enabled()
    for dep in deps:
        line = str(dep)
        if color:
            line = f"\033[{_COLORS[dep.kind]}m{line}\033[0m"
        out.write(line + "\n")
    for v in verdicts:
        state = "parallelizable" if v.parallelizable else "not parallelizable"
        out.write(f"loop {v.loop_id} ({v.var}): {state}\n")
    if closure is not None:
        out.write("closure: " + " ".join(f"({a},{b})" for a, b in closure) + "\n")
    return EXIT_OK


def cmd_transform(args, out) -> int:
    if not (args.dce or args.cp or args.cp_iterate or args.ivd):
        raise UsageError("transform needs at least one of --dce, --cp, --cp-iterate, --ivd")
    prog = _load(args.path)
    cap = args.unroll_cap

    def graph():
        return build_graph(expand_loops(prog, cap))

    report = TransformReport()
    # constants first: propagation can expose dead writes
    if args.cp_iterate:
        prog, step = propagate_constants_fixpoint(graph(), prog, cap)
        report = report.merge(step)
    elif args.cp:
        prog, step = propagate_constants(graph(), prog, cap)
        report = report.merge(step)
    if args.dce:
        prog, step = eliminate_dead_code(graph(), prog, cap)
        report = report.merge(step)
    if args.ivd:
        report = report.merge(detect_induction_variables(graph(), prog))

    source = pretty_print(prog, show_indices=True)
    if args.json:
        out.write(_dump({"source": source, "report": report.to_dict()}) + "\n")
        return EXIT_OK
    out.write(source)
    for key, value in report.to_dict().items():
        if value:
            out.write(f"// {key.replace('_', ' ')}: {json.dumps(value)}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    from .oracle import generate_many, verify_equivalence

    if args.random is None and args.path is None:
        raise UsageError("verify needs a path or --random N")
    results = []
    if args.path is not None:
        results.append((args.path, verify_equivalence(_load(args.path), unroll_cap=args.unroll_cap)))
    if args.random is not None:
        for gp in generate_many(args.random, args.seed):
            results.append((f"random#{gp.seed}", verify_equivalence(gp.program, unroll_cap=args.unroll_cap)))
    failed = [(name, v) for name, v in results if not v.passed]
    if args.json:
        out.write(_dump({
            "checked": len(results),
            "failed": [{"program": n, "diff": v.diff} for n, v in failed],
            "passed": not failed,
        }) + "\n")
    else:
        for name, v in failed:
            out.write(f"FAIL {name}\n")
            for line in v.diff:
                out.write(f"  {line}\n")
        out.write(f"{'FAIL' if failed else 'PASS'}: {len(results) - len(failed)}/{len(results)} programs agree\n")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_fmt(args, out) -> int:
    out.write(pretty_print(_load(args.path), show_indices=args.indices))
    return EXIT_OK


_COMMANDS = {
    "graph": cmd_graph, "deps": cmd_deps, "transform": cmd_transform,
    "verify": cmd_verify, "fmt": cmd_fmt,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("missing command (graph, deps, transform, verify, fmt)")
        return _COMMANDS[args.command](args, out)
    except UsageError as exc:
        err.write(f"error: usage: {exc}\n")
        return EXIT_USAGE
    except DdiError as exc:
        detail = str(exc).replace("\n", " ")
        err.write(f"error: {exc.category}: {detail}\n")
        return EXIT_ERROR


def main(argv=None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
