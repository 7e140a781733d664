"""Command-line interface.

Subcommands mirror the engine: validate, loops, propagate, multiplier,
grade, stats, skeleton, serve. Diagram arguments accept a file path, a
workspace diagram name, or a built-in fixture name; the workspace root
comes from CAUSAL_ECON_WORKSPACE, then --workspace, then ~/.causal-econ.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .core import CausalEconError, enumerate_loops, skeleton_of
from .formats import (
    ANSWER_SHEET_EXTENSION,
    ParseDiagnostic,
    export_dot,
    parse_answer_sheet,
    parse_diagram,
    serialize_skeleton,
)
from .grading import (
    class_stats,
    cohort_track,
    format_pct,
    format_stat,
    grade,
    parse_report_csv,
    render_cohort,
    render_report,
)
from .multiplier import MultiplierParams, g_multiplier, t_multiplier, trace_g, trace_t
from .propagation import Direction, Shock, propagate, propagate_all
from .workspace import Workspace, resolve_root


def _print_diagnostics(path: str, diagnostics: tuple[ParseDiagnostic, ...]) -> None:
    for diag in diagnostics:
        print(f"{path}:{diag}", file=sys.stderr)


def _amount(value: float) -> str:
    return f"{value:g}"


def _parse_shock(text: str) -> Shock:
    variable, _, word = text.partition(":")
    directions = {
        "up": Direction.INCREASE,
        "increase": Direction.INCREASE,
        "down": Direction.DECREASE,
        "decrease": Direction.DECREASE,
    }
    if not variable or word not in directions:
        raise CausalEconError(f"--shock expects <var>:<up|down>, got {text!r}")
    return Shock(variable=variable, direction=directions[word])


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="causal-econ",
        description="Qualitative causal-diagram toolkit for macroeconomics instruction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a diagram file, printing all diagnostics")
    p.add_argument("file")

    p = sub.add_parser("loops", help="list feedback loops and their polarity")
    p.add_argument("diagram")
    p.add_argument("--workspace", default=None)

    p = sub.add_parser("propagate", help="qualitative what-if query")
    p.add_argument("diagram")
    p.add_argument("--shock", required=True, metavar="VAR:up|down")
    p.add_argument("--target", default=None)
    p.add_argument("--freeze", default="", metavar="VAR,VAR")
    p.add_argument("--dot", default=None, metavar="OUT", help="write a DOT overlay file")
    p.add_argument("--workspace", default=None)

    p = sub.add_parser("multiplier", help="trace a multiplier round by round")
    p.add_argument("--kind", choices=["g", "t"], required=True)
    p.add_argument("--mpc", type=float, required=True)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--rounds", type=int, default=5)

    p = sub.add_parser("grade", help="score answer sheets against a reference diagram")
    p.add_argument("--ref", required=True)
    p.add_argument("--answers", required=True, help="an .ans file or a directory of them")
    p.add_argument("--csv", default=None, metavar="OUT")
    p.add_argument("--workspace", default=None)

    p = sub.add_parser("stats", help="class statistics across activities")
    p.add_argument(
        "--activity",
        action="append",
        default=[],
        metavar="NAME=CSV",
        help="a graded CSV produced by `grade --csv` (repeatable)",
    )
    p.add_argument("--common-only", action="store_true",
                   help="restrict to students present in every activity")
    p.add_argument("--skeleton", default=None,
                   help="compute stats over stored workspace submissions instead")
    p.add_argument("--all-attempts", action="store_true",
                   help="with --skeleton: include every attempt, not just the latest")
    p.add_argument("--workspace", default=None)

    p = sub.add_parser("skeleton", help="derive the causal skeleton of a diagram")
    p.add_argument("diagram")
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--workspace", default=None)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--workspace", default=None)

    return parser


def _workspace(args) -> Workspace:
    return Workspace(resolve_root(getattr(args, "workspace", None)))


def _cmd_validate(args) -> int:
    text = Path(args.file).read_text(encoding="utf-8")
    result = parse_diagram(text)
    _print_diagnostics(args.file, result.diagnostics)
    if not result.ok:
        return 1
    d = result.value
    print(f"OK: {d.name} ({len(d.variables)} variables, {len(d.edges)} edges)")
    return 0


def _cmd_loops(args) -> int:
    diagram = _workspace(args).resolve_diagram(args.diagram)
    loops = enumerate_loops(diagram)
    if not loops:
        print("no feedback loops")
        return 0
    print(f"{len(loops)} loop(s):")
    for loop in loops:
        cycle = " -> ".join(loop.variables + (loop.variables[0],))
        print(f"  {loop.polarity.value}: {cycle}")
    if loops.truncated:
        print("  (enumeration truncated at the loop cap)", file=sys.stderr)
    return 0


def _cmd_propagate(args) -> int:
    diagram = _workspace(args).resolve_diagram(args.diagram)
    shock = _parse_shock(args.shock)
    frozen = [v for v in args.freeze.split(",") if v]
    if args.target:
        verdict = propagate(diagram, shock, args.target, frozen)
        print(verdict.outcome.value)
        for path in verdict.witness_paths:
            if path.edges:
                print(f"  via ({path.sign.token}): {' -> '.join(path.variables)}")
    else:
        verdicts = propagate_all(diagram, shock, frozen)
        for vid, verdict in verdicts.items():
            print(f"{vid}: {verdict.outcome.value}")
    if args.dot:
        overlay = propagate_all(diagram, shock, frozen)
        Path(args.dot).write_text(export_dot(diagram, overlay), encoding="utf-8")
        print(f"wrote {args.dot}", file=sys.stderr)
    return 0


def _cmd_multiplier(args) -> int:
    if args.kind == "g":
        params = MultiplierParams(mpc=args.mpc, delta_g=args.delta)
        trace = trace_g(params, args.rounds)
        title = "Government-purchases multiplier"
        formula, factor = "1/(1-MPC)", g_multiplier(args.mpc)
        delta_name = "dG"
    else:
        params = MultiplierParams(mpc=args.mpc, delta_t=args.delta)
        trace = trace_t(params, args.rounds)
        title = "Tax multiplier"
        formula, factor = "MPC/(1-MPC)", t_multiplier(args.mpc)
        delta_name = "dT"
    print(f"{title} trace (MPC={_amount(args.mpc)}, {delta_name}={_amount(args.delta)})")
    width = max(len(r.label) for r in trace.rows)
    for r in trace.rows:
        print(f"  {r.round:>3}  {r.label:<{width}}  {_amount(r.amount):>12}"
              f"  cumulative {_amount(r.cumulative)}")
    print(f"Closed-form total: {_amount(trace.closed_form_total)}")
    print(f"Multiplier {formula} = {_amount(factor)}")
    return 0


def _cmd_grade(args) -> int:
    workspace = _workspace(args)
    reference = workspace.resolve_diagram(args.ref)
    skeleton = skeleton_of(reference)
    answers_path = Path(args.answers)
    if answers_path.is_dir():
        files = sorted(answers_path.glob(f"*{ANSWER_SHEET_EXTENSION}"))
        if not files:
            raise CausalEconError(f"no {ANSWER_SHEET_EXTENSION} files in {answers_path}")
    else:
        files = [answers_path]

    reports = []
    failures = 0
    for path in files:
        result = parse_answer_sheet(path.read_text(encoding="utf-8"), skeleton)
        _print_diagnostics(str(path), result.diagnostics)
        if not result.ok:
            failures += 1
            continue
        reports.append(grade(reference, result.value))
    if reports:
        print(render_report(reports), end="")
        if args.csv:
            Path(args.csv).write_text(render_report(reports, fmt="csv"), encoding="utf-8")
            print(f"wrote {args.csv}", file=sys.stderr)
    return 1 if failures else 0


def _stats_line(name: str, reports) -> str:
    dir_stats = class_stats(reports, "direction_pct")
    pol_stats = class_stats(reports, "polarity_pct")

    def block(stats) -> str:
        sd = format_pct(stats.sd) if stats.sd is not None else "-"
        cv = format_stat(stats.cv) if stats.cv is not None else "-"
        return f"mean {format_pct(stats.mean)}  sd {sd}  cv {cv}"

    return f"{name}: n={dir_stats.n}  direction: {block(dir_stats)}  polarity: {block(pol_stats)}"


def _cmd_stats(args) -> int:
    if args.skeleton:
        workspace = _workspace(args)
        reference = workspace.resolve_diagram(args.skeleton)
        records = workspace.submissions(args.skeleton, latest_only=not args.all_attempts)
        if not records:
            raise CausalEconError(f"no submissions stored for {args.skeleton!r}")
        reports = [grade(reference, workspace.load_submission(r)) for r in records]
        print(render_report(reports), end="")
        print(_stats_line(args.skeleton, reports))
        return 0

    if not args.activity:
        raise CausalEconError("give --activity NAME=CSV (repeatable) or --skeleton NAME")
    activities = []
    for spec_item in args.activity:
        name, sep, path = spec_item.partition("=")
        if not sep:
            raise CausalEconError(f"--activity expects NAME=CSV, got {spec_item!r}")
        activities.append((name, parse_report_csv(Path(path).read_text(encoding="utf-8"))))

    if args.common_only:
        print(render_cohort(cohort_track(activities)), end="")
    else:
        for name, reports in activities:
            print(_stats_line(name, reports))
    return 0


def _cmd_skeleton(args) -> int:
    diagram = _workspace(args).resolve_diagram(args.diagram)
    text = serialize_skeleton(skeleton_of(diagram))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output}", file=sys.stderr)
    else:
        print(text, end="")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    workspace = _workspace(args).ensure()
    uvicorn.run(create_app(workspace), host=args.host, port=args.port, log_level="info")
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "loops": _cmd_loops,
    "propagate": _cmd_propagate,
    "multiplier": _cmd_multiplier,
    "grade": _cmd_grade,
    "stats": _cmd_stats,
    "skeleton": _cmd_skeleton,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except CausalEconError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
