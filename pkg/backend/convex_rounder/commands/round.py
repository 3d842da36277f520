"""
filename: round.py
description: Module for the definitions of the rounding command.
"""

import logging
from argparse import Namespace
from pathlib import Path

from convex_rounder.commands import grid_spec
from convex_rounder.config import settings
from convex_rounder.operations.certificates import smooth_certificate, strict_certificate
from convex_rounder.operations.geometry import hausdorff
from convex_rounder.operations.rounding import RoundingConfig, asplund_round, containment_scale
from convex_rounder.operations.rounding import smoothify, strictify, strictify_constant
from convex_rounder.storage import command_session, load_body, save_body, write_json, write_text

logger = logging.getLogger(__name__)

ALGORITHMS = ("strictify", "smoothify", "asplund")
# certificates each algorithm promises, and therefore gates the exit code on
GATES = {"strictify": ("strict",), "smoothify": ("smooth",), "asplund": ("strict", "smooth")}


def register(subparsers) -> None:
    parser = subparsers.add_parser("round", help="round a body and certify the result")
    parser.add_argument("body", help="body JSON file")
    parser.add_argument("--algorithm", choices=ALGORITHMS, default="asplund")
    parser.add_argument("--epsilon", type=float, default=settings.epsilon)
    parser.add_argument("--reg-weight", type=float, default=settings.reg_weight)
    parser.add_argument("--max-iter", type=int, default=settings.max_iter)
    parser.add_argument("--out-dir", required=True)
    parser.set_defaults(handler=cmd_round)


def cmd_round(args: Namespace) -> int:
    """
    Command to round a body, write the rounded body with its certificates (and the trace of the
    averaging iteration) and report the Hausdorff distance to the input.

    :param args: (Namespace) parsed command line.
    :return: (int) 0 on success, 3 when the distance budget is exceeded, 4 when a promised
        certificate fails.
    """
    with command_session("round") as session:
        body = load_body(args.body)
        cfg = RoundingConfig(
            epsilon=args.epsilon,
            reg_weight=args.reg_weight,
            tol=settings.round_tol if args.tol is None else args.tol,
            max_iter=args.max_iter,
            grid=grid_spec(args),
        )
        grid = cfg.build_grid(body.dimension)
        out_dir = Path(args.out_dir)

        if args.algorithm == "strictify":
            rounded = strictify(body, cfg)
            constant = strictify_constant(body, rounded, cfg.reg_weight, grid)
            session.payload["constant"] = constant
        elif args.algorithm == "smoothify":
            rounded = smoothify(body, cfg)
            session.payload["containment_scale"] = containment_scale(body, rounded, grid)
        else:
            result = asplund_round(body, cfg)
            rounded = result.body
            session.artifact(write_text(out_dir / "trace.csv", result.trace.to_csv()))
            session.payload.update(
                iterations=len(result.trace.steps) - 1,
                converged=result.trace.converged,
                final_gap=result.trace.steps[-1].gap,
                rate=result.trace.rate,
                reg_weight=result.reg_weight,
                inner_outer_distance=result.inner_outer_distance,
            )

        distance = hausdorff(body, rounded, grid)
        reports = {
            "strict": strict_certificate(rounded, seed=args.seed, grid=grid),
            "smooth": smooth_certificate(rounded, seed=args.seed),
        }
        session.artifact(save_body(out_dir / "rounded.json", rounded))
        for kind, report in reports.items():
            document = report.model_dump(by_alias=True)
            session.artifact(write_json(out_dir / f"{kind}.json", document))
            session.payload[kind] = document
        session.payload.update(algorithm=args.algorithm, hausdorff=distance)

        failed = [kind for kind in GATES[args.algorithm] if not reports[kind].passed]
        if failed:
            logger.warning("certificates failed: %s", ", ".join(failed))
            session.exit_code = 4
        elif distance > cfg.epsilon + settings.abs_tol:
            logger.warning(
                "d_H(input, output) = %.4g exceeds epsilon %.4g", distance, cfg.epsilon
            )
            session.exit_code = 3
    return session.exit_code
