"""
filename: certificates.py
description: Module for the definitions of the sampled certificates of strict convexity and
    smoothness, supporting hyperplane selection and the primal/dual consistency check.
"""

import logging

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from convex_rounder.config import settings
from convex_rounder.exceptions import DomainError, SamplingError
from convex_rounder.models.body import Body, LevelSet, Polytope
from convex_rounder.models.energy import Sampled, SquaredGauge, Sum
from convex_rounder.models.grid import DirectionGrid
from convex_rounder.models.reports import CertificateReport
from convex_rounder.operations.geometry import boundary_points, grid_for, polar
from convex_rounder.operations.geometry import require_interior_origin
from convex_rounder.utils.tools import as_rows, random_unit_vectors, tangent_basis

logger = logging.getLogger(__name__)

_NOTE = "sampled evidence, not a proof"
# points closer than this to a polytope vertex are nudged along the sphere
_VERTEX_RADIUS = 1e-9
_VERTEX_NUDGE = 1e-8


def diameter(body: Body, grid: DirectionGrid | None = None) -> float:
    """Largest width sigma(u) + sigma(-u) over the grid"""
    grid = grid_for(body, grid)
    values = body.support(grid.directions)
    return float(np.max(values + values[grid.antipodes]))


def strict_certificate(
    body: Body,
    n_pairs: int | None = None,
    min_separation: float | None = None,
    seed: int = 0,
    floor: float | None = None,
    grid: DirectionGrid | None = None,
) -> CertificateReport:
    """
    Midpoint modulus of strict convexity: min over sampled boundary pairs (x, y) with
    |x - y| >= min_separation of 1 - p((x + y) / 2).

    :param body: (Body) body with the origin in its interior.
    :param n_pairs: (int | None) number of pairs.
    :param min_separation: (float | None) separation floor, 0.1 * diameter when omitted.
    :param seed: (int) sampling seed.
    :param floor: (float | None) the certificate passes when the modulus exceeds it.
    :param grid: (DirectionGrid | None) grid used to measure the diameter.
    :return: (CertificateReport) strict report.
    """
    require_interior_origin(body)
    n_pairs = settings.n_pairs if n_pairs is None else n_pairs
    floor = settings.strict_floor if floor is None else floor
    if min_separation is None:
        min_separation = 0.1 * diameter(body, grid)
    if min_separation <= 0:
        raise DomainError(f"min_separation must be positive, got {min_separation}")

    rng = np.random.default_rng(seed)
    pool = boundary_points(body, random_unit_vectors(rng, max(64, n_pairs), body.dimension))
    first = rng.integers(0, pool.shape[0], size=50 * n_pairs)
    second = rng.integers(0, pool.shape[0], size=50 * n_pairs)
    separated = np.linalg.norm(pool[first] - pool[second], axis=1) >= min_separation
    first, second = first[separated][:n_pairs], second[separated][:n_pairs]
    if first.size < n_pairs:
        raise SamplingError(
            f"found {first.size} of {n_pairs} boundary pairs at separation {min_separation!r}"
        )

    midpoints = 0.5 * (pool[first] + pool[second])
    value = float(np.min(1.0 - body.gauge(midpoints)))
    report = CertificateReport(
        kind="strict",
        value=value,
        threshold=floor,
        passed=value > floor,
        samples=n_pairs,
        min_separation=min_separation,
        seed=seed,
        note=_NOTE,
    )
    logger.info("strict certificate: %.4g (pass=%s)", value, report.passed)
    return report


def _kink_directions(body: Body) -> np.ndarray:
    """
    Rays through the vertices of the polytopes whose squared gauges make up <body> directly,
    sampled gauges included through their polyhedral models; a gauge built from polytope
    gauges only kinks on rays through their faces.
    """
    if isinstance(body, Polytope):
        return body.hull_vertices
    if isinstance(body, LevelSet):
        terms = body.energy.terms if isinstance(body.energy, Sum) else (body.energy,)
        found = [
            term.body.hull_vertices
            for term in terms
            if isinstance(term, SquaredGauge) and isinstance(term.body, Polytope)
        ]
        found += [term.model.hull_vertices for term in terms if isinstance(term, Sampled)]
        if found:
            return np.vstack(found)
    return np.empty((0, body.dimension))


def _away_from_vertices(body: Body, points: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    if not isinstance(body, Polytope) or body.dimension == 1:
        return points
    vertices = body.hull_vertices
    gaps = np.linalg.norm(points[:, None, :] - vertices[None, :, :], axis=2).min(axis=1)
    out = points.copy()
    for i in np.flatnonzero(gaps < _VERTEX_RADIUS):
        direction = points[i] / np.linalg.norm(points[i])
        tangent = rng.standard_normal(body.dimension - 1) @ tangent_basis(direction)
        nudged = direction + _VERTEX_NUDGE * tangent / np.linalg.norm(tangent)
        out[i] = boundary_points(body, nudged)[0]
    return out


def smooth_certificate(
    body: Body,
    n_points: int | None = None,
    n_probe_dirs: int | None = None,
    fd_step: float | None = None,
    seed: int = 0,
    points=None,
    probes=None,
    order: int | None = None,
    ceiling: float | None = None,
) -> CertificateReport:
    """
    Subdifferential gap of the gauge: max over boundary points x and probes y of the one-sided
    derivative sum p'(x; y) + p'(x; -y), zero exactly where p is differentiable along y.

    Order 1 uses (p(x + t y) - p(x)) / t, order 2 the one-sided second-order quotient
    (4 p(x + t y) - p(x + 2 t y) - 3 p(x)) / (2 t); both only look at the y side, so kinks
    register at full size.

    :param body: (Body) body with the origin in its interior.
    :param n_points: (int | None) number of random boundary points.
    :param n_probe_dirs: (int | None) probes per point.
    :param fd_step: (float | None) finite-difference step t.
    :param seed: (int) sampling seed.
    :param points: (array-like | None) explicit boundary points instead of random ones.
    :param probes: (array-like | None) explicit probes, (q, d) shared by all points or
        (m, q, d) per point.
    :param order: (int | None) stencil order, 1 or 2.
    :param ceiling: (float | None) the certificate passes when the gap stays below it.
    :return: (CertificateReport) smooth report.
    """
    require_interior_origin(body)
    dimension = body.dimension
    n_points = settings.n_points if n_points is None else n_points
    n_probe_dirs = settings.n_probe_dirs if n_probe_dirs is None else n_probe_dirs
    step = settings.fd_step if fd_step is None else fd_step
    order = settings.fd_order if order is None else order
    ceiling = settings.smooth_ceiling if ceiling is None else ceiling
    if step <= 0:
        raise DomainError(f"fd_step must be positive, got {step}")
    if order not in (1, 2):
        raise DomainError(f"stencil order must be 1 or 2, got {order}")

    rng = np.random.default_rng(seed)
    if points is None:
        points = boundary_points(body, random_unit_vectors(rng, n_points, dimension))
        kinks = _kink_directions(body)
        if kinks.size:
            points = np.vstack([points, boundary_points(body, kinks)])
    else:
        points = as_rows(points, dimension)[0]
    points = _away_from_vertices(body, points, rng)
    count = points.shape[0]

    if probes is None:
        probes = random_unit_vectors(rng, count * n_probe_dirs, dimension)
        probes = probes.reshape(count, n_probe_dirs, dimension)
    else:
        probes = np.asarray(probes, dtype=float)
        if probes.ndim == 2:
            probes = np.broadcast_to(probes, (count,) + probes.shape)
        if probes.shape[0] != count or probes.shape[-1] != dimension:
            raise DomainError(f"probes of shape {probes.shape} do not match {count} points")
    per_point = probes.shape[1]

    base = np.repeat(body.gauge(points), per_point)
    anchors = np.repeat(points, per_point, axis=0)
    directions = probes.reshape(-1, dimension)

    def one_sided(y):
        near = body.gauge(anchors + step * y)
        if order == 1:
            return (near - base) / step
        far = body.gauge(anchors + 2 * step * y)
        return (4 * near - far - 3 * base) / (2 * step)

    gaps = one_sided(directions) + one_sided(-directions)
    value = float(np.max(gaps))
    report = CertificateReport(
        kind="smooth",
        value=value,
        threshold=ceiling,
        passed=value < ceiling,
        samples=gaps.size,
        fd_step=step,
        fd_order=order,
        seed=seed,
        note=_NOTE,
    )
    logger.info("smooth certificate: %.4g (pass=%s)", value, report.passed)
    return report


def support_hyperplane(
    body: Body, x, grid: DirectionGrid | None = None, tol: float | None = None
) -> np.ndarray:
    """
    Supporting functional at a boundary point: the polar-boundary point u maximising <u, x>,
    searched on the grid and refined locally. Then <u, z> <= 1 on the body and <u, x> ~ 1.

    :param body: (Body) body with the origin in its interior.
    :param x: (array-like) boundary point, p(x) = 1 within tolerance.
    :param grid: (DirectionGrid | None) candidate directions.
    :param tol: (float | None) boundary tolerance.
    :return: (np.ndarray) the functional u.
    """
    require_interior_origin(body)
    tol = settings.rel_tol if tol is None else tol
    x = as_rows(x, body.dimension)[0][0]
    if abs(body.gauge(x) - 1.0) > tol:
        raise DomainError(f"point {x} is not on the boundary (gauge {body.gauge(x)!r})")
    grid = grid_for(body, grid)
    directions = grid.directions

    def candidate(v):
        return v / body.support(v)

    scores = (directions / body.support(directions)[:, None]) @ x
    k = int(np.argmax(scores))
    best, best_score = candidate(directions[k]), float(scores[k])

    if body.dimension == 2:
        start = np.arctan2(directions[k, 1], directions[k, 0])
        result = minimize_scalar(
            lambda t: -float(candidate(np.array([np.cos(t), np.sin(t)])) @ x),
            bounds=(start - grid.spacing, start + grid.spacing),
            method="bounded",
            options={"xatol": 1e-12},
        )
        refined = candidate(np.array([np.cos(result.x), np.sin(result.x)]))
    elif body.dimension > 2:
        basis = tangent_basis(directions[k])
        result = minimize(
            lambda s: -float(candidate(directions[k] + s @ basis) @ x),
            np.zeros(basis.shape[0]),
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-15},
        )
        refined = candidate(directions[k] + result.x @ basis)
    else:
        refined = best
    if float(refined @ x) > best_score + 1e-15:
        best, best_score = refined, float(refined @ x)

    if best_score < 1.0 - tol:
        logger.warning("supporting functional reaches only %.6f at %s", best_score, x)
    return best


def _disagreement(strict: CertificateReport, smooth: CertificateReport) -> float:
    """Zero when both pass or both fail, otherwise how far the failing one is off"""
    if strict.passed == smooth.passed:
        return 0.0
    if strict.passed:
        return smooth.value - smooth.threshold
    return strict.threshold - strict.value


def cross_duality_check(body: Body, grid: DirectionGrid | None = None, seed: int = 0) -> float:
    """
    Strictness of the polar must accompany smoothness of the body, and the other way round.

    :param body: (Body) body with the origin in its interior.
    :param grid: (DirectionGrid | None) grid used to measure diameters.
    :param seed: (int) sampling seed shared by all four certificates.
    :return: (float) largest disagreement magnitude, 0 when both pairs agree.
    """
    require_interior_origin(body)
    dual = polar(body)
    dual_grid = grid_for(dual, grid)
    violation = max(
        _disagreement(
            strict_certificate(dual, seed=seed, grid=dual_grid),
            smooth_certificate(body, seed=seed),
        ),
        _disagreement(
            strict_certificate(body, seed=seed, grid=grid),
            smooth_certificate(dual, seed=seed),
        ),
    )
    logger.info("cross-duality violation: %.4g", violation)
    return violation
