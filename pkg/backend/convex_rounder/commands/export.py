"""
filename: export.py
description: Module for the definitions of the SVG export command.
"""

from argparse import Namespace
from pathlib import Path

import numpy as np
from matplotlib.figure import Figure

from convex_rounder.commands import grid_from_args
from convex_rounder.exceptions import DimensionError
from convex_rounder.operations.geometry import boundary_points
from convex_rounder.storage import command_session, load_body, write_atomic


def register(subparsers) -> None:
    parser = subparsers.add_parser("export", help="draw planar bodies into one SVG figure")
    parser.add_argument("bodies", nargs="+", help="body JSON files")
    parser.add_argument("--out", required=True, help="SVG file")
    parser.set_defaults(handler=cmd_export_svg)


def cmd_export_svg(args: Namespace) -> int:
    """
    Command to render the boundaries of planar bodies as closed polylines sampled at the grid
    directions.

    :param args: (Namespace) parsed command line.
    :return: (int) exit code.
    """
    with command_session("export") as session:
        bodies = [load_body(path) for path in args.bodies]
        if any(body.dimension != 2 for body in bodies):
            raise DimensionError("only planar bodies can be exported")
        directions = grid_from_args(args, 2).directions
        directions = directions[np.argsort(np.arctan2(directions[:, 1], directions[:, 0]))]

        # no pyplot, so no GUI backend gets involved
        figure = Figure(figsize=(6, 6))
        axes = figure.subplots()
        for path, body in zip(args.bodies, bodies):
            curve = boundary_points(body, directions)
            curve = np.vstack([curve, curve[:1]])
            axes.plot(curve[:, 0], curve[:, 1], linewidth=1.2, label=Path(path).stem)
        axes.set_aspect("equal")
        axes.legend(loc="upper right", fontsize="small")
        written = write_atomic(args.out, lambda stream: figure.savefig(stream, format="svg"))
        session.artifact(written)
        session.payload.update(bodies=len(bodies), out=str(written))
    return session.exit_code
