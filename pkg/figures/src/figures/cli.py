"""Command line for the figure makers.

Mirrors the estimator CLI's error contract: configuration and schema
problems exit 2 with a one-line JSON manifest on stderr; the maker's
report is printed to stdout as JSON on success.
"""

import argparse
import json
import sys

from .plots import (SchemaError, make_boxplots, make_function_plots,
                    make_gamma_curve)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavereg-figures",
        description="render figures from wavereg CSV/JSON output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("boxplots", help="adaptive vs oracle boxplots")
    p.add_argument("--results", required=True, help="results or figure CSV")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(fn=lambda a: make_boxplots(a.results, a.out_dir))

    p = sub.add_parser("gamma-curve", help="risk across the selection "
                                           "constant")
    p.add_argument("--curve", required=True, help="gamma-curve CSV")
    p.add_argument("--out", required=True, help="output image path")
    p.add_argument("--summary", default=None,
                   help="gamma-summary JSON for the jump annotation")
    p.set_defaults(fn=lambda a: make_gamma_curve(a.curve, a.out, a.summary))

    p = sub.add_parser("function-plots", help="signal curve and noisy "
                                              "scatters")
    p.add_argument("--in-dir", required=True,
                   help="directory holding figure-1.csv and figure-2-*.csv")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(fn=lambda a: make_function_plots(a.in_dir, a.out_dir))
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = args.fn(args)
    except SchemaError as exc:
        sys.stderr.write(json.dumps(
            {"error": {"type": "schema", "message": str(exc)}}) + "\n")
        return 2
    except OSError as exc:
        sys.stderr.write(json.dumps(
            {"error": {"type": "io", "message": str(exc)}}) + "\n")
        return 2
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
