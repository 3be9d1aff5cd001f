"""Command-line entry point: run scenarios, suites, and preset dumps.

Exit codes: 0 success/completed, 2 usage or config error, 3 blowup guard
tripped, 4 numerical failure, 1 suite with failing members.  The output
directory defaults to ./qnls-out and can be overridden by --out or the
QNLS_OUT environment variable.
"""

import argparse
import os
import sys

from . import acceptance, runner
from .config import ConfigError, parse_config
from .presets import preset_initial
from .spectral import Grid


def _out_dir(args):
    return args.out or os.environ.get("QNLS_OUT") or "qnls-out"


def cmd_run(args):
    try:
        with open(args.config, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config {args.config}: {exc}", file=sys.stderr)
        return runner.EXIT_CONFIG
    try:
        cfg = parse_config(text)
    except ConfigError as exc:
        print("config errors:", file=sys.stderr)
        for e in exc.errors:
            print(f"  {e}", file=sys.stderr)
        return runner.EXIT_CONFIG
    status, csv_path, manifest_path = runner.run(cfg, _out_dir(args))
    print(f"{cfg.name}: {status}")
    print(f"  diagnostics: {csv_path}")
    print(f"  manifest:    {manifest_path}")
    return runner.exit_code_for(status)


def cmd_suite(args):
    try:
        passed, results = runner.run_suite(args.name, jobs=args.jobs,
                                           out_dir=_out_dir(args))
    except runner.RunnerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return runner.EXIT_CONFIG
    print(acceptance.format_report(results))
    n_fail = sum(1 for r in results if not r["passed"])
    print(f"suite {args.name}: {len(results) - n_fail}/{len(results)} checks passed")
    return 0 if passed else 1


def cmd_preset_dump(args):
    params = {}
    for item in args.param or []:
        key, _, value = item.partition("=")
        if not _:
            print(f"error: expected key=value, got {item!r}", file=sys.stderr)
            return runner.EXIT_CONFIG
        params[key.strip()] = float(value)
    grid = Grid(args.n, args.length)
    try:
        field = preset_initial(args.name, params, grid, args.seed)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return runner.EXIT_CONFIG
    print("x,re,im")
    for x, v in zip(grid.x, field.samples):
        print(f"{x:.17g},{v.real:.17g},{v.imag:.17g}")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="qnls",
        description="Numerical laboratory for the 1D quintic nonlinear "
                    "Schrodinger equation")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one scenario config")
    p_run.add_argument("config", help="path to a scenario config file")
    p_run.add_argument("--out", default=None, help="output directory")
    p_run.set_defaults(fn=cmd_run)

    p_suite = sub.add_parser("suite", help="execute a named suite")
    p_suite.add_argument("name", help="acceptance | strichartz | morawetz-ensemble")
    p_suite.add_argument("--jobs", type=int, default=1, help="parallel workers")
    p_suite.add_argument("--out", default=None, help="output directory")
    p_suite.set_defaults(fn=cmd_suite)

    p_dump = sub.add_parser("preset-dump", help="print preset samples as CSV")
    p_dump.add_argument("name", help="gaussian | soliton | random | zero")
    p_dump.add_argument("--n", type=int, default=1024)
    p_dump.add_argument("--length", type=float, default=64.0)
    p_dump.add_argument("--seed", type=int, default=0)
    p_dump.add_argument("--param", action="append",
                        help="preset parameter as key=value (repeatable)")
    p_dump.set_defaults(fn=cmd_preset_dump)

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
