"""
filename: geometry.py
description: Module for the definitions of the primal geometry operations on convex bodies:
    support and gauge queries, polarity, Minkowski sums, Hausdorff distance and recentering.
"""

import logging

import numpy as np

from convex_rounder.config import settings
from convex_rounder.exceptions import DegeneracyError, DimensionError, DomainError
from convex_rounder.models.body import Ball, Body, LevelSet, PolarOf, Polytope, SupportSampled
from convex_rounder.models.grid import DirectionGrid, build_grid
from convex_rounder.models.reports import RecenterResult
from convex_rounder.utils.tools import as_rows, chebyshev_center

logger = logging.getLogger(__name__)


def grid_for(body: Body, grid: DirectionGrid | None = None) -> DirectionGrid:
    """Return <grid> after a dimension check, or the default grid for the body's dimension"""
    if grid is None:
        return build_grid(body.dimension)
    if grid.dimension != body.dimension:
        raise DimensionError(
            f"grid dimension {grid.dimension} != body dimension {body.dimension}"
        )
    return grid


def _same_dimension(a: Body, b: Body) -> None:
    if a.dimension != b.dimension:
        raise DimensionError(f"bodies live in dimensions {a.dimension} and {b.dimension}")


def support(body: Body, direction):
    """
    Support function of <body>.

    :param body: (Body) convex body.
    :param direction: (array-like) nonzero direction (d,) or a stack (m, d).
    :return: (float | np.ndarray) support value(s).
    """
    return body.support(direction)


def gauge(body: Body, point):
    """
    Gauge of <body>, which must contain the origin in its interior.

    :param body: (Body) convex body.
    :param point: (array-like) point (d,) or a stack (m, d).
    :return: (float | np.ndarray) gauge value(s).
    """
    require_interior_origin(body)
    return body.gauge(point)


def require_interior_origin(body: Body) -> None:
    """Raise DomainError unless the origin is an interior point of <body>"""
    if isinstance(body, (Polytope, SupportSampled)):
        body.facet_matrix
    elif isinstance(body, PolarOf) and isinstance(body.body, (Polytope, SupportSampled)):
        # a polar is bounded exactly when the origin is interior to the wrapped body
        body.body.facet_matrix


def polar(body: Body) -> Body:
    """
    Polar body {y : <x, y> <= 1 for all x in body}; a polytope in, a polytope out.

    :param body: (Body) body with the origin in its interior.
    :return: (Body) its polar, p_polar = sigma_body and sigma_polar = p_body.
    """
    if isinstance(body, Ball):
        return Ball(1.0 / body.radius, body.dimension)
    if isinstance(body, PolarOf):
        return body.body
    if isinstance(body, (Polytope, SupportSampled)):
        return Polytope(body.facet_matrix)
    return PolarOf(body)


def minkowski_sum(a: Body, b: Body, grid: DirectionGrid | None = None) -> Body:
    """
    Minkowski sum a + b; support functions add.

    :param a: (Body) first body.
    :param b: (Body) second body.
    :param grid: (DirectionGrid | None) grid for the sampled result.
    :return: (Body) exact for balls and planar polytopes, SupportSampled otherwise.
    """
    _same_dimension(a, b)
    if isinstance(a, Ball) and isinstance(b, Ball):
        return Ball(a.radius + b.radius, a.dimension)
    if isinstance(a, Polytope) and isinstance(b, Polytope) and a.dimension == 2:
        sums = (a.hull_vertices[:, None, :] + b.hull_vertices[None, :, :]).reshape(-1, 2)
        return Polytope(Polytope(sums).hull_vertices)
    grid = grid_for(a, grid)
    return SupportSampled(grid, a.support(grid.directions) + b.support(grid.directions))


def hausdorff(a: Body, b: Body, grid: DirectionGrid | None = None) -> float:
    """
    Hausdorff distance, the uniform distance between support functions on the sphere,
    evaluated on a direction grid.

    :param a: (Body) first body.
    :param b: (Body) second body.
    :param grid: (DirectionGrid | None) evaluation grid, settings default when omitted.
    :return: (float) max_u |sigma_a(u) - sigma_b(u)| over the grid.
    """
    _same_dimension(a, b)
    directions = grid_for(a, grid).directions
    return float(np.max(np.abs(a.support(directions) - b.support(directions))))


def translate(body: Body, shift, grid: DirectionGrid | None = None) -> Body:
    """Translate <body> by <shift>; sampled unless the body is a polytope"""
    shift = as_rows(shift, body.dimension)[0][0]
    if isinstance(body, Polytope):
        return Polytope(body.vertices + shift)
    if isinstance(body, SupportSampled):
        return SupportSampled(body.grid, body.values + body.grid.directions @ shift)
    grid = grid_for(body, grid)
    return SupportSampled(grid, body.support(grid.directions) + grid.directions @ shift)


def scale_body(body: Body, factor: float) -> Body:
    """Dilate <body> about the origin by <factor> > 0, keeping its representation"""
    if not np.isfinite(factor) or factor <= 0:
        raise DomainError(f"scale factor must be positive, got {factor}")
    if isinstance(body, Ball):
        return Ball(body.radius * factor, body.dimension)
    if isinstance(body, Polytope):
        return Polytope(body.vertices * factor)
    if isinstance(body, SupportSampled):
        return SupportSampled(body.grid, body.values * factor)
    if isinstance(body, LevelSet):
        # {f <= r k^2} = k {f <= r}
        return LevelSet(body.energy, body.level * factor**2)
    if isinstance(body, PolarOf):
        return PolarOf(scale_body(body.body, 1.0 / factor))
    raise DomainError(f"cannot scale a {type(body).__name__}")


def inradius(body: Body, grid: DirectionGrid | None = None) -> float:
    """Radius of the largest origin-centred ball inside <body>, zero if the origin is outside"""
    if isinstance(body, Ball):
        return body.radius
    if isinstance(body, Polytope):
        return max(0.0, float(np.min(body.offsets)))
    directions = grid_for(body, grid).directions
    return max(0.0, float(np.min(body.support(directions))))


def circumradius(body: Body, grid: DirectionGrid | None = None) -> float:
    """Radius of the smallest origin-centred ball containing <body>"""
    if isinstance(body, Ball):
        return body.radius
    if isinstance(body, Polytope):
        return float(np.max(np.linalg.norm(body.hull_vertices, axis=1)))
    directions = grid_for(body, grid).directions
    return float(np.max(body.support(directions)))


def contains(body: Body, point, tol: float | None = None):
    """Membership through the gauge, p(x) <= 1 + tol"""
    tol = settings.abs_tol if tol is None else tol
    values = gauge(body, point)
    if np.ndim(values):
        return np.asarray(values) <= 1.0 + tol
    return bool(values <= 1.0 + tol)


def boundary_points(body: Body, directions) -> np.ndarray:
    """Radial projections u / p(u) of nonzero directions onto the boundary of <body>"""
    rows, _ = as_rows(directions, body.dimension)
    values = np.atleast_1d(gauge(body, rows))
    if np.any(values <= 0):
        raise DomainError("boundary points need nonzero directions")
    return rows / values[:, None]


def recenter(
    body: Body, grid: DirectionGrid | None = None, fraction: float | None = None
) -> RecenterResult:
    """
    Translate <body> so that the origin is its Chebyshev centre. Bodies whose inradius about the
    origin is already at least <fraction> of the Chebyshev radius are returned unchanged.

    :param body: (Body) full-dimensional body.
    :param grid: (DirectionGrid | None) grid for the half-space model of non-polytopes.
    :param fraction: (float | None) no-op threshold, settings default when omitted.
    :return: (RecenterResult) recentred body, the subtracted offset and the inradius.
    """
    fraction = settings.recenter_fraction if fraction is None else fraction
    zero = np.zeros(body.dimension)
    if isinstance(body, Ball):
        return RecenterResult(body, zero, body.radius)

    if isinstance(body, Polytope):
        normals, offsets = body.normals, body.offsets
    else:
        grid = body.grid if isinstance(body, SupportSampled) else grid_for(body, grid)
        normals = grid.directions
        offsets = body.support(normals)
    center, radius = chebyshev_center(normals, offsets)
    scale = float(np.max(np.abs(offsets))) or 1.0
    if radius <= settings.abs_tol * scale:
        raise DegeneracyError("body has empty interior and cannot be recentred")

    current = float(np.min(offsets))
    if current >= fraction * radius:
        logger.debug("origin already central (inradius %.3g of %.3g)", current, radius)
        return RecenterResult(body, zero, current)
    logger.info("recentring by %s (inradius %.3g -> %.3g)", center, current, radius)
    if isinstance(body, Polytope):
        return RecenterResult(Polytope(body.vertices - center), center, radius)
    return RecenterResult(SupportSampled(grid, offsets - normals @ center), center, radius)
