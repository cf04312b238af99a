"""Command line front end.

Subcommands:
  list     show the scenario registry with one-line notes
  run      iterate one scenario (or a JSON config) and emit reports
  verify   run every scenario against its expectations, print a PASS/FAIL table

Exit codes: 0 success, 1 usage error, 2 numerical breakdown, 3 verification
failure.
"""
from __future__ import annotations

import argparse
import sys

from .config import ConfigError, load_config
from .engine import IterateOptions, classify, iterate
from .linalg import NumericalError
from .output import emit_summary, emit_svg, emit_trace_csv
from .scenarios import get_scenario, list_scenarios, run as run_scenario

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2
EXIT_VERIFY = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of calling sys.exit(2)."""

    def error(self, message):
        raise _UsageError(f"{self.prog}: error: {message}")


def _build_parser() -> _Parser:
    p = _Parser(prog="drfeas", description=__doc__, add_help=True)
    sub = p.add_subparsers(dest="command", metavar="command")

    sub.add_parser("list", help="list scenarios")

    r = sub.add_parser("run", help="run one scenario or a config file")
    r.add_argument("scenario", nargs="?", help="scenario name (see `list`)")
    r.add_argument("--config", metavar="PATH", help="JSON run configuration")
    r.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override a scenario parameter (repeatable); VALUE is a number or comma list",
    )
    r.add_argument("--max-iter", type=int, default=None, metavar="N")
    r.add_argument("--tol", type=float, default=None, metavar="T", help="fixed-point tolerance")
    r.add_argument("--div-threshold", type=float, default=None, metavar="R")
    r.add_argument("--csv", metavar="PATH", help="write the step table ('-' for stdout)")
    r.add_argument("--json", metavar="PATH", help="write the summary ('-' for stdout)")
    r.add_argument("--svg", metavar="PATH", help="write an SVG picture ('-' for stdout)")
    r.add_argument("--fig", metavar="PATH", help="render a figure (png/pdf/svg by extension)")
    r.add_argument("--dims", default="0,1", metavar="I,J", help="coordinates to draw")

    sub.add_parser("verify", help="run all scenarios and check expectations")
    return p


def _parse_value(text: str):
    parts = text.split(",")
    try:
        vals = [float(t) for t in parts]
    except ValueError:
        raise _UsageError(f"--set value {text!r} is not a number or comma list") from None
    return vals[0] if len(vals) == 1 else tuple(vals)


def _parse_overrides(pairs: list) -> dict:
    out = {}
    for item in pairs:
        if "=" not in item:
            raise _UsageError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = _parse_value(v)
    return out


def _parse_dims(text: str) -> tuple:
    try:
        i, j = (int(t) for t in text.split(","))
    except ValueError:
        raise _UsageError(f"--dims expects two integers like 0,1; got {text!r}") from None
    if i == j or i < 0 or j < 0:
        raise _UsageError(f"--dims expects two distinct nonnegative indices; got {text!r}")
    return (i, j)


def _write(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.6g}"
    try:
        return "(" + ", ".join(f"{float(t):.6g}" for t in v) + ")"
    except TypeError:
        return str(v)


def _summary_lines(trace, report, verdict=None, name=None) -> list:
    lines = []
    if name:
        lines.append(f"scenario      {name}")
    lines.append(f"status        {report.status.value}")
    lines.append(f"steps         {len(trace.steps)} (stop: {trace.stop_reason})")
    lines.append(f"n_stop        {report.n_stop}")
    if report.limit is not None:
        lines.append(f"limit         {_fmt(report.limit)}")
    if report.shadow_limit is not None:
        lines.append(f"shadow_limit  {_fmt(report.shadow_limit)}")
    if report.rate is not None:
        lines.append(f"rate          {_fmt(report.rate)}")
    if report.cycle_period is not None:
        lines.append(f"cycle_period  {report.cycle_period}")
        pts = ", ".join(_fmt(p) for p in report.cycle_points)
        lines.append(f"cycle_points  {pts}")
    if report.best_approx is not None:
        lines.append(
            f"best_approx   a={_fmt(report.best_approx.a)}  b={_fmt(report.best_approx.b)}"
            f"  gap={_fmt(report.best_approx.gap)}"
        )
    ii = report.in_intersection
    lines.append(f"in A∩B        limit={ii.get('limit')}  shadow={ii.get('shadow')}")
    if verdict is not None:
        if verdict.passed:
            lines.append("verdict       PASS")
        else:
            bad = "; ".join(f"{c.name}: {c.detail}" for c in verdict.checks if not c.passed)
            lines.append(f"verdict       FAIL ({bad})")
    return lines


def _cmd_list() -> int:
    names = list_scenarios()
    width = max(len(n) for n in names)
    for n in names:
        print(f"{n:<{width}}  {get_scenario(n).note}")
    return EXIT_OK


def _cmd_run(args) -> int:
    if (args.scenario is None) == (args.config is None):
        raise _UsageError("run needs a scenario name or --config PATH (not both)")
    dims = _parse_dims(args.dims)  # validate up front, not only when plotting
    opt_kwargs = {}
    if args.max_iter is not None:
        opt_kwargs["max_iter"] = args.max_iter
    if args.tol is not None:
        opt_kwargs["fix_tol"] = args.tol
    if args.div_threshold is not None:
        opt_kwargs["div_threshold"] = args.div_threshold

    verdict = None
    name = args.scenario
    if args.config is not None:
        cfg = load_config(args.config)
        base = {
            "max_iter": cfg.options.max_iter,
            "fix_tol": cfg.options.fix_tol,
            "div_threshold": cfg.options.div_threshold,
        }
        base.update(opt_kwargs)
        trace = iterate(cfg.A, cfg.B, cfg.x0, IterateOptions(**base))
        report = classify(trace, cfg.classify_options)
    else:
        overrides = _parse_overrides(args.overrides)
        result = run_scenario(name, overrides, opt_kwargs or None)
        trace, report, verdict = result.trace, result.report, result.verdict

    if args.csv:
        _write(emit_trace_csv(trace), args.csv)
    if args.svg:
        _write(emit_svg(trace, dims), args.svg)
    if args.json:
        _write(emit_summary(report), args.json)
    if args.fig:
        from .figures import render_figure

        render_figure(trace, args.fig, dims)
    if args.json != "-":
        for ln in _summary_lines(trace, report, verdict, name):
            print(ln)
    return EXIT_OK


def _cmd_verify() -> int:
    failures = 0
    for name in sorted(list_scenarios()):
        result = run_scenario(name)
        if result.verdict.passed:
            print(f"PASS {name}")
        else:
            failures += 1
            bad = "; ".join(
                f"{c.name}: {c.detail}" for c in result.verdict.checks if not c.passed
            )
            print(f"FAIL {name} ({bad})")
    return EXIT_VERIFY if failures else EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help()
            return EXIT_USAGE
        if args.command == "list":
            return _cmd_list()
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_verify()
    except _UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (ConfigError, ValueError) as exc:
        print(f"drfeas: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"drfeas: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"drfeas: i/o error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:
    raise SystemExit(main(sys.argv[1:]))


if __name__ == "__main__":
    entry()
