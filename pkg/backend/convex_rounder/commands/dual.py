"""
filename: dual.py
description: Module for the definitions of the duality command.
"""

from argparse import Namespace

from convex_rounder.operations.duality import fenchel, gauge_energy
from convex_rounder.operations.geometry import polar
from convex_rounder.storage import command_session, load_body, save_body, save_energy


def register(subparsers) -> None:
    parser = subparsers.add_parser("dual", help="write the polar body or the conjugate energy")
    parser.add_argument("body", help="body JSON file")
    parser.add_argument("--op", choices=("polar", "fenchel"), required=True)
    parser.add_argument("--out", required=True)
    parser.set_defaults(handler=cmd_dual)


def cmd_dual(args: Namespace) -> int:
    """
    Command to write polar(B) as a body file, or the conjugate of p_B^2 / 2 as an energy file.

    :param args: (Namespace) parsed command line.
    :return: (int) exit code.
    """
    with command_session("dual") as session:
        body = load_body(args.body)
        if args.op == "polar":
            result = polar(body)
            session.artifact(save_body(args.out, result))
        else:
            result = fenchel(gauge_energy(body))
            session.artifact(save_energy(args.out, result))
        session.payload.update(op=args.op, kind=type(result).__name__, dimension=body.dimension)
    return session.exit_code
