"""
filename: dist.py
description: Module for the definitions of the distance command.
"""

from argparse import Namespace

from convex_rounder.commands import grid_from_args
from convex_rounder.exceptions import DimensionError
from convex_rounder.operations.duality import check_forward_lipschitz, check_inverse_lipschitz
from convex_rounder.operations.duality import energy_distance, gauge_energy
from convex_rounder.operations.geometry import hausdorff
from convex_rounder.storage import command_session, load_body


def register(subparsers) -> None:
    parser = subparsers.add_parser("dist", help="Hausdorff distance between two bodies")
    parser.add_argument("body_a", help="first body JSON file")
    parser.add_argument("body_b", help="second body JSON file")
    parser.add_argument(
        "--lipschitz", action="store_true", help="also check both Lipschitz bounds"
    )
    parser.set_defaults(handler=cmd_dist)


def cmd_dist(args: Namespace) -> int:
    """
    Command to print d_H(A, B) and the distance of their energies, optionally checking the
    forward and inverse Lipschitz bounds (exit code 4 on a violation).

    :param args: (Namespace) parsed command line.
    :return: (int) exit code.
    """
    with command_session("dist") as session:
        a, b = load_body(args.body_a), load_body(args.body_b)
        if a.dimension != b.dimension:
            raise DimensionError(f"bodies live in dimensions {a.dimension} and {b.dimension}")
        grid = grid_from_args(args, a.dimension)
        session.payload.update(
            hausdorff=hausdorff(a, b, grid),
            energy_distance=energy_distance(gauge_energy(a), gauge_energy(b), grid),
        )
        if args.lipschitz:
            session.payload["forward"] = check_forward_lipschitz(a, b, grid=grid).model_dump()
            session.payload["inverse"] = check_inverse_lipschitz(a, b, grid=grid).model_dump()
    return session.exit_code
