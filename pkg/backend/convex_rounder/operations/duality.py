"""
filename: duality.py
description: Module for the definitions of the gauge duality operations: the Fenchel
    transform on quadratic gauges, sums, infimal convolution, independent numeric oracles and
    the two-sided Lipschitz checks between bodies and their energies.
"""

import logging

import numpy as np
from scipy.optimize import minimize

from convex_rounder.config import settings
from convex_rounder.exceptions import DimensionError, DomainError, LipschitzBoundError
from convex_rounder.exceptions import PreconditionError
from convex_rounder.models.body import Ball, Body, LevelSet
from convex_rounder.models.energy import ConjugateOf, QuadGauge, Sampled, SmoothedGauge
from convex_rounder.models.energy import SquaredGauge, Sum
from convex_rounder.models.grid import DirectionGrid, build_grid
from convex_rounder.models.reports import LipschitzWitness
from convex_rounder.operations.geometry import grid_for, hausdorff, polar
from convex_rounder.operations.geometry import require_interior_origin
from convex_rounder.utils.tools import as_rows, tangent_basis

logger = logging.getLogger(__name__)


def gauge_energy(body: Body) -> SquaredGauge:
    """
    Quadratic gauge f_C = p_C^2 / 2 of a body with the origin in its interior.

    :param body: (Body) the body C.
    :return: (SquaredGauge) unit-weight squared gauge of C.
    """
    require_interior_origin(body)
    return SquaredGauge(body, 1.0)


def euclidean_energy(dimension: int, weight: float = 1.0) -> SquaredGauge:
    """(weight / 2) |x|^2"""
    return SquaredGauge(Ball(1.0, dimension), weight)


def level_body(energy: QuadGauge, level: float = 0.5) -> LevelSet:
    """
    Sublevel set {x : f(x) <= level}; level 1/2 inverts <gauge_energy>.

    :param energy: (QuadGauge) coercive quadratic gauge.
    :param level: (float) positive level.
    :return: (LevelSet) the sublevel body.
    """
    if not is_coercive(energy):
        raise DomainError("sublevel sets of a non-coercive energy are unbounded")
    return LevelSet(energy, level)


def is_coercive(energy: QuadGauge) -> bool:
    """Whether f(x) > 0 for every x != 0, decided from the structure of the form"""
    if isinstance(energy, SquaredGauge):
        return energy.weight > 0
    if isinstance(energy, Sum):
        return any(is_coercive(term) for term in energy.terms)
    # conjugates of finite forms and positive gauge samples are always coercive
    return isinstance(energy, (ConjugateOf, Sampled, SmoothedGauge))


def fenchel(energy: QuadGauge) -> QuadGauge:
    """
    Fenchel conjugate within the quadratic gauge cone. Squared gauges map to squared gauges of
    the polar body with inverted weight, conjugates unwrap, other forms are wrapped lazily.

    :param energy: (QuadGauge) coercive form.
    :return: (QuadGauge) its conjugate.
    """
    if not is_coercive(energy):
        raise DomainError("energy is not coercive; its conjugate is infinite")
    if isinstance(energy, SquaredGauge):
        return SquaredGauge(polar(energy.body), 1.0 / energy.weight)
    if isinstance(energy, ConjugateOf):
        return energy.inner
    if isinstance(energy, Sampled):
        return SquaredGauge(polar(energy.model), 1.0)
    return ConjugateOf(energy)


def _terms(energy: QuadGauge) -> list:
    return list(energy.terms) if isinstance(energy, Sum) else [energy]


def add(f: QuadGauge, g: QuadGauge) -> QuadGauge:
    """
    Sum of two quadratic gauges. Zero-weight terms are dropped and squared gauges of the same
    body are merged into one term.

    :param f: (QuadGauge) first summand.
    :param g: (QuadGauge) second summand.
    :return: (QuadGauge) the sum, as a single term when possible.
    """
    if f.dimension != g.dimension:
        raise DimensionError(f"energies live in dimensions {f.dimension} and {g.dimension}")
    terms: list[QuadGauge] = []
    for term in _terms(f) + _terms(g):
        if isinstance(term, SquaredGauge):
            if term.weight == 0:
                continue
            same = next(
                (
                    i
                    for i, other in enumerate(terms)
                    if isinstance(other, SquaredGauge) and other.body is term.body
                ),
                None,
            )
            if same is not None:
                terms[same] = SquaredGauge(term.body, terms[same].weight + term.weight)
                continue
        terms.append(term)
    if not terms:
        # only zero-weight terms, keep one so the dimension is known
        return f
    return terms[0] if len(terms) == 1 else Sum(tuple(terms))


def scale(energy: QuadGauge, factor: float) -> QuadGauge:
    """Scalar multiple <factor> * f for a positive factor"""
    if not np.isfinite(factor) or factor <= 0:
        raise DomainError(f"scale factor must be positive, got {factor}")
    return energy.scaled(factor)


def inf_conv(f: QuadGauge, g: QuadGauge) -> QuadGauge:
    """
    Infimal convolution (f # g)(x) = inf_y f(x - y) + g(y), computed as the conjugate of the
    sum of conjugates.

    :param f: (QuadGauge) first energy.
    :param g: (QuadGauge) second energy.
    :return: (QuadGauge) f # g.
    """
    return fenchel(add(fenchel(f), fenchel(g)))


def energy_distance(f: QuadGauge, g: QuadGauge, grid: DirectionGrid | None = None) -> float:
    """Uniform distance between two energies on the unit sphere, evaluated on a grid"""
    if f.dimension != g.dimension:
        raise DimensionError(f"energies live in dimensions {f.dimension} and {g.dimension}")
    directions = (grid or build_grid(f.dimension)).directions
    return float(np.max(np.abs(f(directions) - g(directions))))


def young_fenchel_gap(energy: QuadGauge, x, u) -> float:
    """f(x) + f*(u) - <u, x>, nonnegative and zero exactly on subgradient pairs"""
    x = as_rows(x, energy.dimension)[0][0]
    u = as_rows(u, energy.dimension)[0][0]
    return float(energy(x) + energy.conjugate(u) - u @ x)


def _patch(center: np.ndarray, radius: float) -> np.ndarray:
    """Unit directions filling a small cap of angular radius <radius> around <center>"""
    offsets = np.linspace(-1.0, 1.0, 9) * radius
    dimension = center.size
    if dimension == 1:
        return np.empty((0, 1))
    basis = tangent_basis(center)
    if dimension == 2:
        steps = offsets[:, None] * basis[0]
    elif dimension == 3:
        a, b = np.meshgrid(offsets, offsets)
        steps = a.reshape(-1, 1) * basis[0] + b.reshape(-1, 1) * basis[1]
    else:
        steps = np.vstack([offsets[:, None] * axis for axis in basis])
    points = center + steps
    return points / np.linalg.norm(points, axis=1)[:, None]


def _zoom(ray_maxima, center: np.ndarray, best: float, radius: float, levels: int):
    """Greedy cap refinement around one start; returns the visited patches and the best ray"""
    visited = []
    for _ in range(levels):
        patch = _patch(center, radius)
        if not patch.size:
            break
        visited.append(patch)
        rays = ray_maxima(patch)
        k = int(np.argmax(rays))
        if rays[k] > best:
            center, best = patch[k], rays[k]
        radius *= 0.5
    return visited, center


def _polish(ray_maxima, center: np.ndarray) -> np.ndarray:
    """Nelder-Mead over tangent coordinates at <center>, returning the best unit direction"""
    if center.size == 1:
        return center
    basis = tangent_basis(center)

    def direction(s):
        point = center + s @ basis
        return point / np.linalg.norm(point)

    result = minimize(
        lambda s: -float(ray_maxima(direction(s)[None, :])[0]),
        np.zeros(center.size - 1),
        method="Nelder-Mead",
        options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 400 * center.size},
    )
    return direction(result.x)


def brute_conjugate(
    energy: QuadGauge,
    u,
    search_grid: DirectionGrid | None = None,
    radial_steps: int = 4096,
    refine_levels: int = 40,
    starts: int = 8,
) -> float:
    """
    Oracle for the conjugate that only evaluates f: the maximum of <u, x> - f(x) over the
    sampled points x = t v, for directions v from the search grid plus local zooms around the
    <starts> best rays, and radial scales t = j t_max / radial_steps. The sampled directions do
    not depend on radial_steps, so the value never decreases when radial_steps doubles.

    :param energy: (QuadGauge) coercive form.
    :param u: (array-like) dual point (d,).
    :param search_grid: (DirectionGrid | None) coarse direction set.
    :param radial_steps: (int) number of radial intervals, at least 2.
    :param refine_levels: (int) number of zoom levels around each start.
    :param starts: (int) number of grid rays the zoom starts from.
    :return: (float) a lower bound on f*(u).
    """
    u = as_rows(u, energy.dimension)[0][0]
    if radial_steps < 2:
        raise DomainError(f"radial_steps must be at least 2, got {radial_steps}")
    grid = search_grid or build_grid(energy.dimension)
    if np.any(energy._value(grid.directions) <= 0):
        raise DomainError("energy is not coercive; its conjugate is infinite")

    def ray_maxima(directions):
        along = directions @ u
        return np.where(along > 0, along**2 / (4 * energy._value(directions)), 0.0)

    sampled = [grid.directions]
    rays = ray_maxima(grid.directions)
    for k in np.argsort(rays)[::-1][:starts]:
        if rays[k] <= 0:
            break
        visited, center = _zoom(
            ray_maxima, grid.directions[k], rays[k], 2 * grid.spacing, refine_levels
        )
        sampled.extend(visited)
        sampled.append(_polish(ray_maxima, center)[None, :])

    directions = np.vstack(sampled)
    values = energy._value(directions)
    if np.any(values <= 0):
        raise DomainError("energy is not coercive; its conjugate is infinite")
    along = directions @ u
    t_max = np.linalg.norm(u) / float(np.min(values))
    step = t_max / radial_steps
    # f(t v) = t^2 f(v); the concave ray profile peaks between two neighbouring samples
    peak = np.clip(along / (2 * values), 0.0, t_max)
    low = np.floor(peak / step)
    candidates = np.stack([low, np.minimum(low + 1, radial_steps)]) * step
    objective = candidates * along - candidates**2 * values
    return float(max(0.0, np.max(objective)))


def direct_inf_conv(f: QuadGauge, g: QuadGauge, x) -> float:
    """
    Oracle for the infimal convolution by direct minimisation of y -> f(x - y) + g(y).

    :param f: (QuadGauge) first energy.
    :param g: (QuadGauge) second energy.
    :param x: (array-like) point (d,).
    :return: (float) an upper bound on (f # g)(x).
    """
    if f.dimension != g.dimension:
        raise DimensionError(f"energies live in dimensions {f.dimension} and {g.dimension}")
    x = as_rows(x, f.dimension)[0][0]

    def objective(y):
        return float(f(x - y) + g(y))

    best = min(objective(np.zeros_like(x)), objective(x))
    for start in (0.5 * x, 0.25 * x, 0.75 * x):
        result = minimize(
            objective, start, method="Powell", options={"xtol": 1e-10, "ftol": 1e-14}
        )
        polished = minimize(
            objective,
            result.x,
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000},
        )
        best = min(best, float(result.fun), float(polished.fun))
    return best


def _grid_bodies(a: Body, c: Body, grid: DirectionGrid | None) -> DirectionGrid:
    if a.dimension != c.dimension:
        raise DimensionError(f"bodies live in dimensions {a.dimension} and {c.dimension}")
    return grid_for(a, grid)


def check_forward_lipschitz(
    a: Body, c: Body, delta: float | None = None, grid: DirectionGrid | None = None
) -> LipschitzWitness:
    """
    Check |f_A - f_C| <= M d_H(A, C) on the sphere for bodies whose support functions are at
    least delta on the grid, with M = max(P_A, P_C) (P_A + P_C) / (2 delta) and P the gauge
    maxima on the sphere.

    :param a: (Body) first body.
    :param c: (Body) second body.
    :param delta: (float | None) lower bound on the support functions, measured when omitted.
    :param grid: (DirectionGrid | None) evaluation grid.
    :return: (LipschitzWitness) the witness; raises LipschitzBoundError when the bound fails.
    """
    grid = _grid_bodies(a, c, grid)
    directions = grid.directions
    floor = min(float(np.min(a.support(directions))), float(np.min(c.support(directions))))
    delta = floor if delta is None else delta
    if delta <= 0 or floor < delta * (1 - settings.abs_tol):
        raise PreconditionError(
            f"support functions must stay above delta={delta!r} on the grid (min {floor!r})"
        )
    top_a = float(np.max(a.gauge(directions))) * settings.safety_factor
    top_c = float(np.max(c.gauge(directions))) * settings.safety_factor
    bound = max(top_a, top_c) * (top_a + top_c) / (2 * delta)

    body_distance = hausdorff(a, c, grid)
    distance = energy_distance(gauge_energy(a), gauge_energy(c), grid)
    witness = LipschitzWitness(
        kind="forward",
        delta=delta,
        bound_m=bound,
        body_distance=body_distance,
        energy_distance=distance,
        observed_ratio=distance / body_distance if body_distance > 0 else 0.0,
        holds=distance <= bound * body_distance + settings.abs_tol,
    )
    logger.info("forward Lipschitz: ratio %.4g vs bound %.4g", witness.observed_ratio, bound)
    if not witness.holds:
        raise LipschitzBoundError("energy distance exceeds the forward bound", witness=witness)
    return witness


def check_inverse_lipschitz(
    a: Body, c: Body, grid: DirectionGrid | None = None
) -> LipschitzWitness:
    """
    Check d_H(A, C) <= L r with r = max |p_A - p_C| on the grid, L = (b + g + r b g) max(b, g)
    and b, g the circumradii of A and C.

    :param a: (Body) first body.
    :param c: (Body) second body.
    :param grid: (DirectionGrid | None) evaluation grid.
    :return: (LipschitzWitness) the witness; raises LipschitzBoundError when the bound fails.
    """
    grid = _grid_bodies(a, c, grid)
    directions = grid.directions
    gauge_gap = float(np.max(np.abs(a.gauge(directions) - c.gauge(directions))))
    beta = float(np.max(a.support(directions))) * settings.safety_factor
    gamma = float(np.max(c.support(directions))) * settings.safety_factor
    bound = (beta + gamma + gauge_gap * beta * gamma) * max(beta, gamma)

    body_distance = hausdorff(a, c, grid)
    witness = LipschitzWitness(
        kind="inverse",
        bound_l=bound,
        body_distance=body_distance,
        energy_distance=energy_distance(gauge_energy(a), gauge_energy(c), grid),
        observed_ratio=body_distance / gauge_gap if gauge_gap > 0 else 0.0,
        holds=body_distance <= bound * gauge_gap + settings.abs_tol,
    )
    logger.info("inverse Lipschitz: ratio %.4g vs bound %.4g", witness.observed_ratio, bound)
    if not witness.holds:
        raise LipschitzBoundError("body distance exceeds the inverse bound", witness=witness)
    return witness
