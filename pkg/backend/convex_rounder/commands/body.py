"""
filename: body.py
description: Module for the definitions of the commands that create body files.
"""

import logging
from argparse import Namespace

from convex_rounder.commands import grid_from_args
from convex_rounder.exceptions import SpecError
from convex_rounder.operations.geometry import circumradius, inradius, recenter
from convex_rounder.operations.presets import PRESETS, preset_body
from convex_rounder.storage import command_session, load_body, save_body

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("body", help="create body files")
    actions = parser.add_subparsers(dest="action", required=True)
    make = actions.add_parser("make", help="write a normalised, recentred body file")
    source = make.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", choices=PRESETS)
    source.add_argument("--spec", help="body JSON file to normalise")
    make.add_argument("--dim", type=int, default=None)
    make.add_argument("--radius", type=float, default=1.0)
    make.add_argument("--vertices", type=int, default=12)
    make.add_argument("--out", required=True)
    make.set_defaults(handler=cmd_body_make)


def cmd_body_make(args: Namespace) -> int:
    """
    Command to build a preset or load a body document, recentre it and write it out.

    :param args: (Namespace) parsed command line.
    :return: (int) exit code.
    """
    with command_session("body make") as session:
        if args.preset:
            body = preset_body(args.preset, args.dim, args.radius, args.seed, args.vertices)
        else:
            body = load_body(args.spec)
            if args.dim is not None and args.dim != body.dimension:
                raise SpecError(f"--dim {args.dim} does not match the {body.dimension}-d body")
        grid = grid_from_args(args, body.dimension)
        centred = recenter(body, grid)
        session.artifact(save_body(args.out, centred.body))
        session.payload.update(
            kind=type(centred.body).__name__,
            dimension=centred.body.dimension,
            inradius=inradius(centred.body, grid),
            circumradius=circumradius(centred.body, grid),
            offset=centred.offset.tolist(),
        )
        logger.info("wrote %s", args.out)
    return session.exit_code
