"""
filename: grid.py
description: Module for the definition of the finite direction grid on the unit sphere.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.transform import Rotation

from convex_rounder.config import settings
from convex_rounder.exceptions import DimensionError, SpecError
from convex_rounder.utils.tools import random_unit_vectors

logger = logging.getLogger(__name__)

_UNIT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class DirectionGrid:
    """
    Finite set of unit directions, closed under negation and without repetitions. Every
    grid is reproducible from (dimension, n, seed) through <build_grid>.
    """

    dimension: int
    n: int
    seed: int
    directions: np.ndarray = field(repr=False)

    def __post_init__(self):
        directions = np.asarray(self.directions, dtype=float)
        if directions.ndim != 2 or directions.shape[1] != self.dimension:
            raise DimensionError(
                f"grid directions must have shape (m, {self.dimension}), got {directions.shape}"
            )
        if np.any(np.abs(np.linalg.norm(directions, axis=1) - 1.0) > _UNIT_TOL):
            raise SpecError("grid directions must be unit vectors")
        tree = cKDTree(directions)
        if tree.query_pairs(_UNIT_TOL):
            raise SpecError("grid directions must be distinct")
        distance, _ = tree.query(-directions)
        if np.any(distance > _UNIT_TOL):
            raise SpecError("grid must be closed under negation")
        directions.setflags(write=False)
        object.__setattr__(self, "directions", directions)

    @property
    def size(self) -> int:
        return self.directions.shape[0]

    @cached_property
    def antipodes(self) -> np.ndarray:
        """Index of -u for every grid direction u"""
        _, index = cKDTree(self.directions).query(-self.directions)
        return index

    @cached_property
    def angles(self) -> np.ndarray:
        """Polar angles in [0, 2 pi), planar grids only"""
        if self.dimension != 2:
            raise DimensionError("angles are only defined for planar grids")
        return np.mod(np.arctan2(self.directions[:, 1], self.directions[:, 0]), 2 * np.pi)

    @property
    def spacing(self) -> float:
        """Typical angular distance between neighbouring directions"""
        if self.dimension == 1:
            return np.pi
        if self.dimension == 2:
            return 2 * np.pi / self.size
        return float(np.sqrt(4 * np.pi / self.size))


def default_grid_size(dimension: int) -> int:
    if dimension == 2:
        return settings.grid_n
    return settings.grid_n_3d


def _fibonacci_sphere(count: int) -> np.ndarray:
    """Fibonacci lattice of <count> points spread over the whole sphere"""
    index = np.arange(count) + 0.5
    z = 1.0 - 2.0 * index / count
    radius = np.sqrt(1.0 - z * z)
    phi = np.pi * (1.0 + np.sqrt(5.0)) * index
    return np.column_stack([radius * np.cos(phi), radius * np.sin(phi), z])


def build_grid(dimension: int, n: int | None = None, seed: int | None = None) -> DirectionGrid:
    """
    Build a deterministic direction grid.

    d=1 uses {+1, -1}; d=2 uses the exact angles 2 pi k / n with n rounded up to an even
    number; d=3 uses a seeded random rotation of a Fibonacci lattice together with its
    antipodes; higher dimensions use seeded Gaussian directions and their antipodes.

    :param dimension: (int) ambient dimension, at least 1.
    :param n: (int | None) requested number of directions, settings default when omitted.
    :param seed: (int | None) seed for the randomised constructions.
    :return: (DirectionGrid) the grid.
    """
    if dimension < 1:
        raise DimensionError(f"dimension must be positive, got {dimension}")
    n = default_grid_size(dimension) if n is None else int(n)
    seed = settings.grid_seed if seed is None else int(seed)
    if n < 2:
        raise SpecError(f"grid size must be at least 2, got {n}")

    if dimension == 1:
        return DirectionGrid(1, 2, seed, np.array([[1.0], [-1.0]]))
    if dimension == 2:
        n += n % 2
        theta = 2 * np.pi * np.arange(n) / n
        directions = np.column_stack([np.cos(theta), np.sin(theta)])
        # exact antipodes, cos/sin of theta + pi are only equal up to rounding
        half = n // 2
        directions[half:] = -directions[:half]
        return DirectionGrid(2, n, seed, directions)

    half = max(n // 2, dimension)
    if dimension == 3:
        rotation = Rotation.random(None, seed)
        points = rotation.apply(_fibonacci_sphere(half))
    else:
        points = random_unit_vectors(np.random.default_rng(seed), half, dimension)
    points /= np.linalg.norm(points, axis=1)[:, None]
    logger.debug("built %d-direction grid in dimension %d (seed %d)", 2 * half, dimension, seed)
    return DirectionGrid(dimension, 2 * half, seed, np.vstack([points, -points]))
