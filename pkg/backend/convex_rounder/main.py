"""
filename: main.py
description: Project's root module; builds the command line and dispatches to the commands.
"""

import argparse
import logging
import sys

from convex_rounder.commands import body, cert, dist, dual, export
from convex_rounder.commands import round as round_command
from convex_rounder.config import settings

__version__ = "0.1.0"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="convex-rounder",
        description="Convex body rounding: gauges, duality, smoothing and certificates",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--grid-n", type=int, default=None, help="direction grid size")
    parser.add_argument("--grid-seed", type=int, default=None, help="direction grid seed")
    parser.add_argument("--tol", type=float, default=None, help="rounding gap tolerance")
    parser.add_argument("--seed", type=int, default=0, help="sampling seed")
    parser.add_argument("--log-level", default=settings.log_level)
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in (body, round_command, cert, dual, dist, export):
        command.register(subparsers)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=args.log_level.upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    return args.handler(args)


if __name__ == "__main__":
    sys.exit(main())
