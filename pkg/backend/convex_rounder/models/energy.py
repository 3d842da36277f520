"""
filename: energy.py
description: Module for the definitions of quadratic gauges f = p_C^2 / 2 and their structural
    forms. Every form evaluates itself and its Fenchel conjugate; sums are conjugated by a
    quadratic program over an epigraph linearisation of their polyhedral terms.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from convex_rounder.exceptions import DimensionError, DomainError
from convex_rounder.models.body import Ball, Body, LevelSet, PolarOf, Polytope, SupportSampled
from convex_rounder.models.grid import DirectionGrid, build_grid
from convex_rounder.utils.tools import as_rows, scaled_norm, unwrap

logger = logging.getLogger(__name__)


class QuadGauge(ABC):
    """Nonnegative, convex, 2-homogeneous function on R^d"""

    dimension: int

    def __call__(self, points):
        rows, single = as_rows(points, self.dimension)
        return unwrap(self._value(rows), single)

    def conjugate(self, points):
        """
        Fenchel conjugate f*(u) = sup_x <u, x> - f(x).

        :param points: (array-like) dual point(s), shape (d,) or (m, d).
        :return: (float | np.ndarray) conjugate value(s).
        """
        rows, single = as_rows(points, self.dimension)
        return unwrap(self._conjugate(rows), single)

    @abstractmethod
    def scaled(self, factor: float) -> "QuadGauge":
        """Return the form of <factor> * f, factor > 0"""

    @abstractmethod
    def _value(self, rows: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _conjugate(self, rows: np.ndarray) -> np.ndarray: ...


@dataclass(frozen=True, eq=False)
class SquaredGauge(QuadGauge):
    """(weight / 2) * p_body(x)^2"""

    body: Body
    weight: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.weight) or self.weight < 0:
            raise DomainError(f"weight must be nonnegative, got {self.weight}")

    @property
    def dimension(self) -> int:
        return self.body.dimension

    def scaled(self, factor: float) -> "SquaredGauge":
        return SquaredGauge(self.body, self.weight * factor)

    def _value(self, rows: np.ndarray) -> np.ndarray:
        return 0.5 * self.weight * self.body._gauge(rows) ** 2

    def _conjugate(self, rows: np.ndarray) -> np.ndarray:
        if self.weight == 0:
            raise DomainError("a zero-weight term is not coercive; its conjugate is infinite")
        out = np.zeros(rows.shape[0])
        nonzero = np.any(rows != 0.0, axis=1)
        out[nonzero] = self.body._support(rows[nonzero]) ** 2 / (2 * self.weight)
        return out


@dataclass(frozen=True, eq=False)
class ConjugateOf(QuadGauge):
    """Fenchel conjugate of another form; the quadratic gauge cone is closed under it"""

    inner: QuadGauge

    @property
    def dimension(self) -> int:
        return self.inner.dimension

    def scaled(self, factor: float) -> "ConjugateOf":
        # (lambda h)* = lambda h*(. / lambda) = (h / lambda)* by 2-homogeneity
        return ConjugateOf(self.inner.scaled(1.0 / factor))

    def _value(self, rows: np.ndarray) -> np.ndarray:
        return self.inner._conjugate(rows)

    def _conjugate(self, rows: np.ndarray) -> np.ndarray:
        return self.inner._value(rows)


@dataclass(frozen=True, eq=False)
class Sampled(QuadGauge):
    """
    Quadratic gauge given by gauge samples P_k on a grid: f is the squared gauge of the
    polyhedral model conv{u_k / P_k}, which takes the value P_k^2 / 2 at u_k whenever the
    samples come from a convex gauge.
    """

    grid: DirectionGrid
    gauge_values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.gauge_values, dtype=float)
        if values.shape != (self.grid.size,):
            raise DimensionError(
                f"expected {self.grid.size} gauge samples, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)) or np.any(values <= 0):
            raise DomainError("gauge samples must be finite and positive")
        values.setflags(write=False)
        object.__setattr__(self, "gauge_values", values)

    @property
    def dimension(self) -> int:
        return self.grid.dimension

    def scaled(self, factor: float) -> "Sampled":
        return Sampled(self.grid, self.gauge_values * np.sqrt(factor))

    @cached_property
    def model(self) -> Polytope:
        return Polytope(self.grid.directions / self.gauge_values[:, None])

    def _value(self, rows: np.ndarray) -> np.ndarray:
        return 0.5 * self.model._gauge(rows) ** 2

    def _conjugate(self, rows: np.ndarray) -> np.ndarray:
        return 0.5 * self.model._support(rows) ** 2


@dataclass(frozen=True, eq=False)
class SmoothedGauge(QuadGauge):
    """
    f(x) = (h(x)^2 + reg |x|^2) / 2 where h(x) = |(F x)_+|_q aggregates the facet functionals
    F_k = u_k / Q_k of the polyhedron {x : <u_k, x> <= Q_k} in an l_q norm instead of taking
    their maximum. For q > 1 and reg > 0, f is differentiable and strictly convex; since
    h >= max_k <F_k, x>, the body {f <= 1/2} lies inside the polyhedron and approaches it as
    q grows and reg shrinks.
    """

    grid: DirectionGrid
    offsets: np.ndarray
    power: float
    reg: float

    def __post_init__(self):
        offsets = np.asarray(self.offsets, dtype=float)
        if offsets.shape != (self.grid.size,):
            raise DimensionError(
                f"expected {self.grid.size} facet offsets, got shape {offsets.shape}"
            )
        if not np.all(np.isfinite(offsets)) or np.any(offsets <= 0):
            raise DomainError("facet offsets must be finite and positive")
        if not np.isfinite(self.power) or self.power <= 1:
            raise DomainError(f"power must exceed 1, got {self.power}")
        if not np.isfinite(self.reg) or self.reg <= 0:
            raise DomainError(f"reg must be positive, got {self.reg}")
        offsets.setflags(write=False)
        object.__setattr__(self, "offsets", offsets)

    @property
    def dimension(self) -> int:
        return self.grid.dimension

    @cached_property
    def facets(self) -> np.ndarray:
        return self.grid.directions / self.offsets[:, None]

    def scaled(self, factor: float) -> "SmoothedGauge":
        # c f(x) = f(sqrt(c) x)
        return SmoothedGauge(
            self.grid, self.offsets / np.sqrt(factor), self.power, self.reg * factor
        )

    def _aggregate(self, rows: np.ndarray):
        """h(x) and the weights w_k with grad h = sum_k w_k F_k"""
        values = np.maximum(rows @ self.facets.T, 0.0)
        top = values.max(axis=1)
        ratios = values / np.where(top > 0, top, 1.0)[:, None]
        total = np.sum(ratios**self.power, axis=1)
        aggregate = top * total ** (1.0 / self.power)
        scale = np.where(total > 0, total, 1.0) ** ((1.0 - self.power) / self.power)
        return aggregate, ratios ** (self.power - 1) * scale[:, None]

    def _value(self, rows: np.ndarray) -> np.ndarray:
        aggregate, _ = self._aggregate(rows)
        return 0.5 * (aggregate**2 + self.reg * np.sum(rows * rows, axis=1))

    def _objective(self, x: np.ndarray, u: np.ndarray):
        """f(x) - <u, x> and its gradient"""
        aggregate, weights = self._aggregate(x[None, :])
        value = 0.5 * (aggregate[0] ** 2 + self.reg * (x @ x)) - u @ x
        gradient = aggregate[0] * (weights[0] @ self.facets) + self.reg * x - u
        return float(value), gradient

    def _conjugate(self, rows: np.ndarray) -> np.ndarray:
        out = np.zeros(rows.shape[0])
        for i, u in enumerate(rows):
            norm = scaled_norm(u)
            if norm == 0.0:
                continue
            unit = u / norm
            # maximiser along the ray through u
            start = unit / (2 * float(self._value(unit[None, :])[0]))
            result = minimize(
                self._objective,
                start,
                args=(unit,),
                jac=True,
                method="BFGS",
                options={"gtol": 1e-12, "maxiter": 1000},
            )
            best = max(-self._objective(result.x, unit)[0], -self._objective(start, unit)[0])
            out[i] = norm**2 * best
        return out


@dataclass(frozen=True, eq=False)
class Sum(QuadGauge):
    terms: tuple

    def __post_init__(self):
        terms = tuple(self.terms)
        if not terms:
            raise DomainError("a sum needs at least one term")
        dims = {term.dimension for term in terms}
        if len(dims) != 1:
            raise DimensionError(f"sum terms live in different dimensions: {sorted(dims)}")
        object.__setattr__(self, "terms", terms)

    @property
    def dimension(self) -> int:
        return self.terms[0].dimension

    def scaled(self, factor: float) -> "Sum":
        return Sum(tuple(term.scaled(factor) for term in self.terms))

    @cached_property
    def linearized(self) -> "_Linearized":
        linearized = _Linearized()
        _linearize(self, 1.0, linearized)
        return linearized

    def _value(self, rows: np.ndarray) -> np.ndarray:
        return np.sum([term._value(rows) for term in self.terms], axis=0)

    def _conjugate(self, rows: np.ndarray) -> np.ndarray:
        linearized = self.linearized
        out = np.zeros(rows.shape[0])
        for i, u in enumerate(rows):
            if not np.any(u):
                continue
            if linearized.general:
                out[i] = conjugate_by_search(self, u)
                continue
            value, converged = _conjugate_by_program(self, linearized, u)
            if not converged:
                logger.warning("conjugate program did not converge at u=%s, searching", u)
                value = max(value, conjugate_by_search(self, u))
            out[i] = value
        return out


@dataclass
class _Linearized:
    """
    f(x) = quadratic |x|^2 / 2 + sum_j (w_j / 2) max(0, max_i <A_j[i], x>)^2 + general terms.
    """

    quadratic: float = 0.0
    blocks: list = field(default_factory=list)
    general: list = field(default_factory=list)


def _linearize(energy: QuadGauge, factor: float, acc: _Linearized) -> None:
    if isinstance(energy, Sum):
        for term in energy.terms:
            _linearize(term, factor, acc)
    elif isinstance(energy, SquaredGauge):
        _linearize_gauge(energy.body, factor * energy.weight, acc)
    elif isinstance(energy, ConjugateOf) and isinstance(energy.inner, SquaredGauge):
        if energy.inner.weight == 0:
            raise DomainError("a zero-weight term is not coercive; its conjugate is infinite")
        _linearize_support(energy.inner.body, factor / energy.inner.weight, acc)
    elif isinstance(energy, Sampled):
        _linearize_gauge(energy.model, factor, acc)
    else:
        acc.general.append(energy.scaled(factor))


def _linearize_gauge(body: Body, weight: float, acc: _Linearized) -> None:
    """Add (weight / 2) p_body^2"""
    if weight == 0:
        return
    if isinstance(body, Ball):
        acc.quadratic += weight / body.radius**2
    elif isinstance(body, (Polytope, SupportSampled)):
        acc.blocks.append((weight, body.facet_matrix))
    elif isinstance(body, LevelSet):
        # p^2 = f / level
        _linearize(body.energy, weight / (2 * body.level), acc)
    elif isinstance(body, PolarOf):
        _linearize_support(body.body, weight, acc)
    else:
        acc.general.append(SquaredGauge(body, weight))


def _linearize_support(body: Body, weight: float, acc: _Linearized) -> None:
    """Add (weight / 2) sigma_body^2"""
    if weight == 0:
        return
    if isinstance(body, Ball):
        acc.quadratic += weight * body.radius**2
    elif isinstance(body, Polytope):
        acc.blocks.append((weight, body.hull_vertices))
    elif isinstance(body, SupportSampled):
        acc.blocks.append((weight, body.model_vertices))
    elif isinstance(body, PolarOf):
        _linearize_gauge(body.body, weight, acc)
    elif isinstance(body, LevelSet):
        # sigma^2 = 4 level f*
        acc.general.append(ConjugateOf(body.energy.scaled(1.0 / (2 * weight * body.level))))
    else:
        acc.general.append(SquaredGauge(PolarOf(body), weight))


def _conjugate_by_program(energy: QuadGauge, lin: _Linearized, u: np.ndarray):
    """
    Solve max_x <u, x> - f(x) for a fully linearised f as the program
    min q |x|^2 / 2 + sum_j w_j t_j^2 / 2 - <u, x>  s.t.  t_j >= A_j x, t_j >= 0.

    :return: (tuple) the conjugate value and whether the solver converged.
    """
    dimension = u.size
    if not lin.blocks:
        if lin.quadratic <= 0:
            raise DomainError("energy is not coercive; its conjugate is infinite")
        return float(u @ u) / (2 * lin.quadratic), True

    count = len(lin.blocks)
    weights = np.array([weight for weight, _ in lin.blocks])
    rows = []
    for j, (_, matrix) in enumerate(lin.blocks):
        block = np.zeros((matrix.shape[0], dimension + count))
        block[:, :dimension] = -matrix
        block[:, dimension + j] = 1.0
        rows.append(block)
    constraint = np.vstack(rows)

    # f* is 2-homogeneous: solve at the unit vector and rescale
    norm = scaled_norm(u)
    unit = u / norm

    # maximiser along the ray through u
    x0 = unit / (2 * float(energy._value(unit[None, :])[0]))
    t0 = np.array([max(0.0, float(np.max(matrix @ x0))) for _, matrix in lin.blocks])

    def objective(z):
        x, t = z[:dimension], z[dimension:]
        return 0.5 * lin.quadratic * (x @ x) + 0.5 * weights @ (t * t) - unit @ x

    def gradient(z):
        x, t = z[:dimension], z[dimension:]
        return np.concatenate([lin.quadratic * x - unit, weights * t])

    result = minimize(
        objective,
        np.concatenate([x0, t0]),
        jac=gradient,
        method="SLSQP",
        bounds=[(None, None)] * dimension + [(0.0, None)] * count,
        constraints=[
            {"type": "ineq", "fun": lambda z: constraint @ z, "jac": lambda z: constraint}
        ],
        options={"ftol": 1e-15, "maxiter": 1000},
    )
    x = result.x[:dimension]
    # exact objective at the returned point is a certified lower bound
    value = float(unit @ x - energy._value(x[None, :])[0])
    ray_value = float(unit @ x0 - energy._value(x0[None, :])[0])
    # mode 8 is a line-search stall at an already optimal point
    converged = result.success or result.status == 8
    return norm**2 * max(value, ray_value), converged


@lru_cache(maxsize=8)
def _search_grid(dimension: int) -> DirectionGrid:
    return build_grid(dimension)


def conjugate_by_search(energy: QuadGauge, u: np.ndarray) -> float:
    """
    Conjugate through a radial search: along each ray the supremum is <u, v>^2 / (4 f(v)),
    the best grid ray is then refined locally.

    :param energy: (QuadGauge) coercive form.
    :param u: (np.ndarray) dual point, shape (d,).
    :return: (float) f*(u).
    """
    if not np.any(u):
        return 0.0
    norm = scaled_norm(u)
    u = u / norm
    grid = _search_grid(energy.dimension)
    directions = grid.directions
    values = energy._value(directions)
    if np.any(values <= 0):
        raise DomainError("energy is not coercive; its conjugate is infinite")
    along = directions @ u
    rays = np.where(along > 0, along**2 / (4 * values), 0.0)
    k = int(np.argmax(rays))
    best = float(rays[k])

    if energy.dimension == 2:
        start = np.arctan2(directions[k, 1], directions[k, 0])

        def negative_ray(t):
            v = np.array([[np.cos(t), np.sin(t)]])
            a = float(v[0] @ u)
            return -(a * a) / (4 * float(energy._value(v)[0])) if a > 0 else 0.0

        result = minimize_scalar(
            negative_ray,
            bounds=(start - grid.spacing, start + grid.spacing),
            method="bounded",
            options={"xatol": 1e-12},
        )
        return norm**2 * max(best, -float(result.fun))
    if energy.dimension > 2:
        x0 = directions[k] * along[k] / (2 * values[k])
        result = minimize(
            lambda x: float(energy._value(x[None, :])[0]) - u @ x,
            x0,
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 2000 * energy.dimension},
        )
        return norm**2 * max(best, -float(result.fun))
    return norm**2 * best
