"""plotviz CLI: `plotviz plot <spec.json>` or `plotviz plot --csv ... --kind ...`."""

import argparse
import json
import sys

from .core import KINDS, PlotSpec, SchemaError, render


def _spec_from_args(args):
    if args.spec:
        try:
            with open(args.spec, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise SchemaError(f"cannot read spec {args.spec}: {exc}") from exc
        return PlotSpec(raw["csv"], raw["kind"], raw.get("columns"),
                        raw.get("out", "figure.png"))
    if not args.csv or not args.kind:
        raise SchemaError("need either a spec file or --csv and --kind")
    columns = args.columns.split(",") if args.columns else None
    return PlotSpec(args.csv, args.kind, columns, args.out)


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="plotviz", description="Render qnls diagnostics CSVs into figures")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("plot", help="render one figure")
    p.add_argument("spec", nargs="?", default=None,
                   help="JSON spec file {csv, kind, columns?, out?}")
    p.add_argument("--csv", default=None, help="input CSV path")
    p.add_argument("--kind", default=None, choices=KINDS)
    p.add_argument("--columns", default=None, help="comma-separated column names")
    p.add_argument("--out", default="figure.png", help="output image path")
    args = parser.parse_args(argv)

    try:
        info = render(_spec_from_args(args))
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    line = f"wrote {info['out']} ({info['kind']})"
    if "slope" in info:
        line += f", slope = {info['slope']:.3f}"
    print(line)
    return 0


if __name__ == "__main__":
    sys.exit(main())
