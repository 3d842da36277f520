"""
filename: cert.py
description: Module for the definitions of the certificate command.
"""

from argparse import Namespace
from pathlib import Path

from convex_rounder.commands import grid_from_args
from convex_rounder.operations.certificates import cross_duality_check, smooth_certificate
from convex_rounder.operations.certificates import strict_certificate
from convex_rounder.storage import command_session, load_body, write_json, write_text


def register(subparsers) -> None:
    parser = subparsers.add_parser("cert", help="certify strict convexity or smoothness")
    parser.add_argument("body", help="body JSON file")
    parser.add_argument("--kind", choices=("strict", "smooth", "cross"), required=True)
    parser.add_argument("--n-pairs", type=int, default=None)
    parser.add_argument("--min-separation", type=float, default=None)
    parser.add_argument("--n-points", type=int, default=None)
    parser.add_argument("--n-probe-dirs", type=int, default=None)
    parser.add_argument("--fd-step", type=float, default=None)
    parser.add_argument("--fd-order", type=int, choices=(1, 2), default=None)
    parser.add_argument(
        "--out", default=None, help="also write the report to this file (CSV for .csv)"
    )
    parser.set_defaults(handler=cmd_cert)


def cmd_cert(args: Namespace) -> int:
    """
    Command to run one certificate on a body file; exit code 4 when it does not pass. The
    cross kind reports the primal/dual disagreement and is diagnostic only.

    :param args: (Namespace) parsed command line.
    :return: (int) exit code.
    """
    with command_session("cert") as session:
        body = load_body(args.body)
        grid = grid_from_args(args, body.dimension)
        if args.kind == "cross":
            violation = cross_duality_check(body, grid, args.seed)
            session.payload.update(kind="cross", violation=violation)
            return session.exit_code
        if args.kind == "strict":
            report = strict_certificate(
                body, args.n_pairs, args.min_separation, seed=args.seed, grid=grid
            )
        else:
            report = smooth_certificate(
                body,
                args.n_points,
                args.n_probe_dirs,
                args.fd_step,
                seed=args.seed,
                order=args.fd_order,
            )
        document = report.model_dump(by_alias=True)
        if args.out and Path(args.out).suffix == ".csv":
            session.artifact(write_text(args.out, report.to_csv()))
        elif args.out:
            session.artifact(write_json(args.out, document))
        session.payload.update(document)
        if not report.passed:
            session.exit_code = 4
    return session.exit_code
