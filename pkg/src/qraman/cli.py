"""Command-line entry point.

Usage: ``qraman <mode> --config FILE --out DIR [--threads N]
[--engine impulsive|numeric]`` with modes spectrum, homscan, dynamics,
compare, validate.

Exit codes: 0 success, 1 usage/config error, 2 numerical-convergence
failure, 3 validation failure.
"""

from __future__ import annotations

import argparse
import sys

from .config import MODES, parse_config
from .errors import ConfigError, ConvergenceError, QRamanError
from .runner import run


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qraman", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="mode", required=True)
    for mode in MODES:
        p = sub.add_parser(mode, help=f"run the {mode} mode")
        p.add_argument("--config", required=(mode != "validate"), help="INI config file")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--threads", type=int, default=None, help="worker count (1 = serial)")
        p.add_argument(
            "--engine",
            choices=("impulsive", "numeric"),
            default=None,
            help="signal evaluation path override",
        )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config is not None:
            with open(args.config, "r", encoding="utf-8") as fh:
                cfg = parse_config(fh.read())
        else:
            from .config import RunConfig

            cfg = RunConfig()
        if args.threads is not None:
            if args.threads < 0:
                raise ConfigError("--threads must be >= 0")
            cfg.numerics.workers = args.threads
        if args.engine is not None:
            cfg.numerics.engine = args.engine
        ok = run(cfg, args.out, mode=args.mode)
    except OSError as exc:
        print(f"qraman: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"qraman: config error: {exc}", file=sys.stderr)
        return 1
    except ConvergenceError as exc:
        print(f"qraman: convergence failure: {exc}", file=sys.stderr)
        return 2
    except QRamanError as exc:
        print(f"qraman: {exc}", file=sys.stderr)
        return 1
    if not ok:
        print("qraman: validation failed (see validation.txt)", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
