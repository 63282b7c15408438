"""Command-line entry point.

Usage: ``figkit <panel> --in CSV [--in CSV ...] --value re|abs --out PNG``
with panels heatmap, zoom, delay-scan, dynamics.  Writes the image plus a
``<out>.stats.txt`` sidecar.  Exit codes: 0 success, 1 bad input.
"""

from __future__ import annotations

import argparse
import sys

from .io import PANEL_SCHEMAS, VALUE_COLUMNS, SchemaError
from .panels import render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="figkit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="panel", required=True)
    for panel in PANEL_SCHEMAS:
        p = sub.add_parser(panel, help=f"render a {panel} panel")
        p.add_argument(
            "--in",
            dest="inputs",
            action="append",
            required=True,
            metavar="CSV",
            help="input table (repeatable)",
        )
        p.add_argument("--value", choices=VALUE_COLUMNS, default="abs")
        p.add_argument("--out", required=True, metavar="PNG")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sidecar = render(args.panel, args.inputs, args.value, args.out)
    except (OSError, SchemaError) as exc:
        print(f"figkit: {exc}", file=sys.stderr)
        return 1
    print(sidecar)
    return 0


if __name__ == "__main__":
    sys.exit(main())
