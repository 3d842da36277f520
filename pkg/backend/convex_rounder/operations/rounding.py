"""
filename: rounding.py
description: Module for the definitions of the rounding algorithms: strictification of the
    primal energy, smoothing through the dual energy, and the averaging iteration that squeezes
    a strictly convex inner body and a smooth outer body onto a body that is both.
"""

import logging

import numpy as np
from pydantic import BaseModel, Field

from convex_rounder.config import settings
from convex_rounder.exceptions import BudgetError, NonMonotoneError
from convex_rounder.models.body import Ball, Body, LevelSet
from convex_rounder.models.energy import SmoothedGauge
from convex_rounder.models.grid import DirectionGrid, build_grid
from convex_rounder.models.reports import IterationStep, IterationTrace, RoundingResult
from convex_rounder.operations.duality import add, euclidean_energy, gauge_energy, level_body
from convex_rounder.operations.geometry import grid_for, hausdorff, polar
from convex_rounder.operations.geometry import require_interior_origin
from convex_rounder.schemas import GridSpec
from convex_rounder.utils.tools import support_of_points

logger = logging.getLogger(__name__)

# relative slack for the order checks of the discrete iteration
_ORDER_SLACK = 1e-12


class RoundingConfig(BaseModel):
    epsilon: float = Field(default_factory=lambda: settings.epsilon, gt=0)
    reg_weight: float = Field(default_factory=lambda: settings.reg_weight, gt=0)
    tol: float = Field(default_factory=lambda: settings.round_tol, gt=0)
    max_iter: int = Field(default_factory=lambda: settings.max_iter, ge=1)
    max_halvings: int = Field(default_factory=lambda: settings.max_halvings, ge=0)
    grid: GridSpec = Field(default_factory=GridSpec)

    def build_grid(self, dimension: int) -> DirectionGrid:
        return build_grid(dimension, self.grid.n, self.grid.seed)


def strictify(body: Body, cfg: RoundingConfig) -> Body:
    """
    Inner strictly convex approximation {x : p(x)^2 / 2 + (reg / 2) |x|^2 <= 1/2}.

    :param body: (Body) body with the origin in its interior.
    :param cfg: (RoundingConfig) only <reg_weight> is used.
    :return: (Body) a ball for ball input, a LevelSet otherwise.
    """
    require_interior_origin(body)
    if isinstance(body, Ball):
        radius = body.radius / np.sqrt(1.0 + cfg.reg_weight * body.radius**2)
        return Ball(radius, body.dimension)
    energy = add(gauge_energy(body), euclidean_energy(body.dimension, cfg.reg_weight))
    return level_body(energy, 0.5)


def smoothify(body: Body, cfg: RoundingConfig) -> Body:
    """
    Outer smooth approximation: the polar of the strictified polar body. Its gauge is the
    support function of a strictly convex body, hence differentiable off the origin.

    :param body: (Body) body with the origin in its interior.
    :param cfg: (RoundingConfig) only <reg_weight> is used.
    :return: (Body) a ball for ball input, the polar of a LevelSet otherwise.
    """
    require_interior_origin(body)
    return polar(strictify(polar(body), cfg))


def strictify_constant(body: Body, result: Body, reg_weight: float, grid=None) -> float:
    """Measured K with d_H(result, body) = K * reg_weight"""
    return hausdorff(body, result, grid) / reg_weight


def containment_scale(body: Body, result: Body, grid=None) -> float:
    """Smallest s with body / s inside result on every grid direction"""
    directions = grid_for(body, grid).directions
    return float(np.max(body.support(directions) / result.support(directions)))


def _bracket(body: Body, cfg: RoundingConfig, grid: DirectionGrid):
    """Halve reg_weight until the inner and outer approximations are epsilon-close"""
    reg_weight = cfg.reg_weight
    for halving in range(cfg.max_halvings + 1):
        step_cfg = cfg.model_copy(update={"reg_weight": reg_weight})
        inner = strictify(body, step_cfg)
        outer = smoothify(body, step_cfg)
        distance = hausdorff(inner, outer, grid)
        logger.info("reg_weight %.4g: d_H(inner, outer) = %.4g", reg_weight, distance)
        if distance < cfg.epsilon:
            return inner, outer, reg_weight, halving, distance
        reg_weight /= 2
    raise BudgetError(
        f"d_H(inner, outer) stayed >= {cfg.epsilon!r} after {cfg.max_halvings} halvings"
    )


def _materialize(body: Body, offsets: np.ndarray, cfg: RoundingConfig, grid: DirectionGrid):
    """
    Smooth strictly convex body inside the polyhedral limit {x : <u_k, x> <= Q_k}: the power of
    the facet aggregation doubles until the body is epsilon-close to the input.

    :return: (tuple) the rounded body, the power used and its distance to the input.
    """
    power = settings.soft_power
    for _ in range(settings.soft_doublings + 1):
        rounded = LevelSet(SmoothedGauge(grid, offsets, power, settings.soft_reg), 0.5)
        distance = hausdorff(body, rounded, grid)
        logger.info("facet power %.4g: d_H(body, rounded) = %.4g", power, distance)
        if distance < cfg.epsilon:
            return rounded, power, distance
        power *= 2
    raise BudgetError(
        f"d_H(body, rounded) stayed >= {cfg.epsilon!r} "
        f"after {settings.soft_doublings} power doublings"
    )


def asplund_round(body: Body, cfg: RoundingConfig) -> RoundingResult:
    """
    Averaging iteration f_n = (f + g) / 2 and g_n* = (f* + g*) / 2 between the energies of an
    inner strictly convex body A and an outer smooth body C.

    The energies live on the direction grid: f as primal gauge samples P (body conv{u_k / P_k})
    and g as dual gauge samples Q (body {x : <u_k, x> <= Q_k}); discrete conjugation is the
    support of the opposite model at the grid. On this scheme the sandwich g_n <= f_n and both
    monotone chains hold exactly, so the uniform gap never increases. The limit polyhedron of
    g is returned through a smoothed facet aggregation, which keeps it smooth and strictly
    convex.

    :param body: (Body) body with the origin in its interior.
    :param cfg: (RoundingConfig) rounding parameters.
    :return: (RoundingResult) the rounded body, its trace and the bracket.
    """
    require_interior_origin(body)
    grid = cfg.build_grid(body.dimension)
    directions = grid.directions
    inner, outer, reg_weight, halvings, distance = _bracket(body, cfg, grid)

    upper = inner.gauge(directions)
    dual_lower = outer.support(directions)
    lower = support_of_points(directions / dual_lower[:, None], directions)

    def gap_of(p, q):
        return float(np.max(np.abs(0.5 * p**2 - 0.5 * q**2)))

    trace = IterationTrace()
    gap = gap_of(upper, lower)
    trace.steps.append(
        IterationStep(
            iter=0,
            gap=gap,
            monotone_upper_ok=True,
            monotone_lower_ok=True,
            sandwich_ok=bool(np.all(lower <= upper * (1 + _ORDER_SLACK))),
        )
    )
    for step in range(1, cfg.max_iter + 1):
        if gap < cfg.tol:
            trace.converged = True
            break
        dual_upper = support_of_points(directions / upper[:, None], directions)
        new_upper = np.sqrt(0.5 * (upper**2 + lower**2))
        dual_lower = np.sqrt(0.5 * (dual_upper**2 + dual_lower**2))
        new_lower = support_of_points(directions / dual_lower[:, None], directions)

        new_gap = gap_of(new_upper, new_lower)
        record = IterationStep(
            iter=step,
            gap=new_gap,
            monotone_upper_ok=bool(np.all(new_upper <= upper * (1 + _ORDER_SLACK))),
            monotone_lower_ok=bool(np.all(new_lower >= lower * (1 - _ORDER_SLACK))),
            sandwich_ok=bool(np.all(new_lower <= new_upper * (1 + _ORDER_SLACK))),
            contraction=new_gap / gap if gap > 0 else None,
        )
        trace.steps.append(record)
        logger.debug("iteration %d: gap %.3e", step, new_gap)
        if not record.ok:
            raise NonMonotoneError(f"order violated at iteration {step}", trace=trace)
        upper, lower, gap = new_upper, new_lower, new_gap
    else:
        trace.converged = gap < cfg.tol

    logger.info(
        "averaging stopped after %d steps, gap %.3e (converged=%s, rate=%s)",
        len(trace.steps) - 1,
        gap,
        trace.converged,
        trace.rate,
    )
    rounded, power, _ = _materialize(body, dual_lower, cfg, grid)
    return RoundingResult(
        body=rounded,
        dual_body=LevelSet(SmoothedGauge(grid, upper, power, settings.soft_reg), 0.5),
        inner=inner,
        outer=outer,
        trace=trace,
        reg_weight=reg_weight,
        halvings=halvings,
        inner_outer_distance=distance,
    )
