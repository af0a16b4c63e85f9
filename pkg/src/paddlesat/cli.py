"""Command-line entry point.

Exit status: 0 when every requirement line passes, 1 when any fails,
2 for bad arguments, unreadable scenarios or evaluation errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .report import Verdict, render_report
from .scenario import (
    EvaluationError,
    ScenarioError,
    baseline_source,
    evaluate,
    load_scenario,
    render_schema,
    render_sweep,
    sweep,
)

DOMAIN_COMMANDS = ("orbit", "optics", "rf", "power")
EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("scenario", nargs="?", help="scenario TOML file (default: built-in baseline)")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="PATH=VALUE",
                   help="override a scenario field, e.g. rf.separation_km=0.5 (repeatable)")
    p.add_argument("--seed", type=int, help="Monte Carlo seed (overrides the scenario's)")
    _add_output(p)


def _add_output(p: argparse.ArgumentParser):
    p.add_argument("--format", choices=("text", "machine"),
                   default=os.environ.get("PADDLESAT_FORMAT", "text"),
                   help="output format (default: $PADDLESAT_FORMAT or text)")
    p.add_argument("-o", "--output", help="write to this file instead of standard output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="paddlesat", description="Laser power-beaming companion feasibility budgets.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in DOMAIN_COMMANDS:
        _add_common(sub.add_parser(name, help=f"{name} budget lines only"))
    _add_common(sub.add_parser("evaluate", help="full mission report"))
    sp = sub.add_parser("sweep", help="evaluate once per value of one scenario field")
    _add_common(sp)
    sp.add_argument("--param", required=True, help="dotted field path, e.g. formation.separation_max_m")
    sp.add_argument("--values", required=True, help="comma-separated values")
    sp.add_argument("--lines", help="comma-separated report line keys to tabulate (default: all)")
    sp.add_argument("--workers", type=int, default=1, help="parallel row evaluations")
    _add_output(sub.add_parser("schema", help="print the scenario file schema"))
    return parser


def _load(args):
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"seed={args.seed}")
    if args.scenario:
        source = Path(args.scenario).read_bytes()
    else:
        source = baseline_source()
    return load_scenario(source, overrides)


def _emit(data: bytes, output: str | None):
    if output:
        Path(output).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()


def _parse_values(text: str) -> list:
    from .scenario import _parse_value

    return [_parse_value(v.strip()) for v in text.split(",") if v.strip()]


def run(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "schema":
            _emit(render_schema(args.format), args.output)
            return EXIT_PASS
        scenario = _load(args)
        if args.command == "sweep":
            lines = [k.strip() for k in args.lines.split(",")] if args.lines else None
            table = sweep(scenario, args.param, _parse_values(args.values), lines, workers=args.workers)
            _emit(render_sweep(table, args.format), args.output)
            ok = all(r.verdict == Verdict.PASS.value for r in table.rows)
            return EXIT_PASS if ok else EXIT_FAIL
        report = evaluate(scenario)
        if args.command in DOMAIN_COMMANDS:
            report = report.filter(args.command)
        _emit(render_report(report, args.format), args.output)
        return EXIT_PASS if report.overall_verdict is Verdict.PASS else EXIT_FAIL
    except (ScenarioError, EvaluationError, OSError) as exc:
        print(f"paddlesat: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main(argv: list[str] | None = None) -> int:
    try:
        return run(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_INPUT
