"""
filename: presets.py
description: Module for the named preset bodies offered by the command line.
"""

import itertools

import numpy as np

from convex_rounder.exceptions import SpecError
from convex_rounder.models.body import Ball, Body, Polytope
from convex_rounder.operations.geometry import recenter
from convex_rounder.utils.tools import random_unit_vectors

PRESETS = ("ball", "square", "cross", "cube", "simplex", "random-polytope")


def cube(dimension: int = 3) -> Polytope:
    return Polytope(np.array(list(itertools.product([-1.0, 1.0], repeat=dimension))))


def cross(dimension: int = 2) -> Polytope:
    """Unit ball of the l1 norm, conv{+-e_i}"""
    identity = np.eye(dimension)
    return Polytope(np.vstack([identity, -identity]))


def simplex(dimension: int = 2) -> Polytope:
    """Regular simplex centred at the origin with unit circumradius"""
    apex = np.full(dimension, (1 - np.sqrt(dimension + 1)) / dimension)
    vertices = np.vstack([np.eye(dimension), apex])
    vertices -= vertices.mean(axis=0)
    return Polytope(vertices / np.linalg.norm(vertices[0]))


def random_polytope(seed: int = 0, vertices: int = 12, dimension: int = 2) -> Polytope:
    """
    Hull of seeded random points at radii in [0.5, 1], recentred on its Chebyshev centre.

    :param seed: (int) generator seed.
    :param vertices: (int) number of random points, at least dimension + 1.
    :param dimension: (int) ambient dimension.
    :return: (Polytope) the recentred hull.
    """
    if vertices <= dimension:
        raise SpecError(f"need more than {dimension} points, got {vertices}")
    rng = np.random.default_rng(seed)
    radii = rng.uniform(0.5, 1.0, (vertices, 1))
    points = random_unit_vectors(rng, vertices, dimension) * radii
    return recenter(Polytope(Polytope(points).hull_vertices)).body


def preset_body(
    name: str,
    dimension: int | None = None,
    radius: float = 1.0,
    seed: int = 0,
    vertices: int = 12,
) -> Body:
    """
    Build a named preset.

    :param name: (str) one of PRESETS.
    :param dimension: (int | None) ambient dimension; square is always planar.
    :param radius: (float) ball radius.
    :param seed: (int) seed of random-polytope.
    :param vertices: (int) point count of random-polytope.
    :return: (Body) the preset body.
    """
    if name == "ball":
        return Ball(radius, dimension or 2)
    if name == "square":
        return cube(2)
    if name == "cross":
        return cross(dimension or 2)
    if name == "cube":
        return cube(dimension or 3)
    if name == "simplex":
        return simplex(dimension or 2)
    if name == "random-polytope":
        return random_polytope(seed, vertices, dimension or 2)
    raise SpecError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
