"""
filename: __init__.py
description: Module for the helpers shared by the command modules.
"""

from argparse import Namespace

from convex_rounder.models.grid import DirectionGrid, build_grid
from convex_rounder.schemas import GridSpec


def grid_spec(args: Namespace) -> GridSpec:
    return GridSpec(n=args.grid_n, seed=args.grid_seed)


def grid_from_args(args: Namespace, dimension: int) -> DirectionGrid:
    """Direction grid from the global --grid-n/--grid-seed flags, settings defaults otherwise"""
    return build_grid(dimension, args.grid_n, args.grid_seed)

