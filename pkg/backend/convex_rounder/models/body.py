"""
filename: body.py
description: Module for the definitions of the convex body representations. Each body answers
    vectorised support-function and gauge queries.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError

from convex_rounder.config import settings
from convex_rounder.exceptions import DegeneracyError, DimensionError, DomainError
from convex_rounder.exceptions import UnboundednessError
from convex_rounder.models.grid import DirectionGrid
from convex_rounder.utils.tools import as_rows, chebyshev_center, support_of_points
from convex_rounder.utils.tools import unique_rows, unwrap

logger = logging.getLogger(__name__)


class Body(ABC):
    """
    Compact convex set in R^d. Subclasses implement the row-wise kernels <_support> and
    <_gauge>; the public methods handle shapes and validation.
    """

    dimension: int

    def support(self, directions):
        """
        Support function sigma(u) = max_{x in body} <u, x>.

        :param directions: (array-like) one direction (d,) or a stack (m, d); nonzero.
        :return: (float | np.ndarray) value(s) of the support function.
        """
        rows, single = as_rows(directions, self.dimension)
        if np.any(np.all(rows == 0.0, axis=1)):
            raise DomainError("support direction must be nonzero")
        return unwrap(self._support(rows), single)

    def gauge(self, points):
        """
        Gauge (Minkowski functional) p(x) = inf {t >= 0 : x in t body}.

        :param points: (array-like) one point (d,) or a stack (m, d).
        :return: (float | np.ndarray) value(s) of the gauge.
        """
        rows, single = as_rows(points, self.dimension)
        return unwrap(self._gauge(rows), single)

    @abstractmethod
    def _support(self, rows: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _gauge(self, rows: np.ndarray) -> np.ndarray: ...


@dataclass(frozen=True, eq=False)
class Polytope(Body):
    vertices: np.ndarray

    def __post_init__(self):
        vertices = np.atleast_2d(np.asarray(self.vertices, dtype=float))
        if vertices.ndim != 2 or vertices.shape[0] == 0:
            raise DomainError("polytope needs a nonempty (k, d) vertex array")
        if not np.all(np.isfinite(vertices)):
            raise DomainError("polytope vertices must be finite")
        vertices.setflags(write=False)
        object.__setattr__(self, "vertices", vertices)
        # raises DegeneracyError on flat input
        self._halfspaces

    @property
    def dimension(self) -> int:
        return self.vertices.shape[1]

    @cached_property
    def _hull(self) -> ConvexHull | None:
        if self.dimension == 1:
            return None
        if self.vertices.shape[0] <= self.dimension:
            raise DegeneracyError(
                f"{self.vertices.shape[0]} vertices cannot span dimension {self.dimension}"
            )
        try:
            hull = ConvexHull(self.vertices)
        except QhullError as e:
            raise DegeneracyError(f"polytope is not full-dimensional: {e}".splitlines()[0])
        extent = np.ptp(self.vertices, axis=0).max()
        if hull.volume <= settings.abs_tol * extent**self.dimension:
            raise DegeneracyError("polytope has zero volume")
        logger.debug("hull keeps %d of %d points", len(hull.vertices), len(self.vertices))
        return hull

    @cached_property
    def _halfspaces(self) -> tuple[np.ndarray, np.ndarray]:
        """Unit outward normals and offsets, body = {x : <n_i, x> <= b_i}"""
        if self.dimension == 1:
            low, high = self.vertices.min(), self.vertices.max()
            if high - low <= settings.abs_tol:
                raise DegeneracyError("segment has zero length")
            return np.array([[1.0], [-1.0]]), np.array([high, -low])
        equations = unique_rows(self._hull.equations)
        return equations[:, :-1], -equations[:, -1]

    @property
    def normals(self) -> np.ndarray:
        return self._halfspaces[0]

    @property
    def offsets(self) -> np.ndarray:
        return self._halfspaces[1]

    @cached_property
    def hull_vertices(self) -> np.ndarray:
        """Extreme points only; counter-clockwise in the plane"""
        if self.dimension == 1:
            return np.array([[self.vertices.min()], [self.vertices.max()]])
        return self.vertices[self._hull.vertices]

    @cached_property
    def facet_matrix(self) -> np.ndarray:
        """Rows n_i / b_i, so that p(x) = max(0, max_i <row_i, x>). Needs 0 in the interior."""
        if np.any(self.offsets <= settings.abs_tol):
            raise DomainError("origin is not an interior point of the polytope")
        return self.normals / self.offsets[:, None]

    def _support(self, rows: np.ndarray) -> np.ndarray:
        return support_of_points(self.hull_vertices, rows)

    def _gauge(self, rows: np.ndarray) -> np.ndarray:
        return np.maximum(support_of_points(self.facet_matrix, rows), 0.0)


@dataclass(frozen=True, eq=False)
class Ball(Body):
    radius: float = 1.0
    dimension: int = 2

    def __post_init__(self):
        if not np.isfinite(self.radius) or self.radius <= 0:
            raise DegeneracyError(f"ball radius must be positive, got {self.radius}")
        if self.dimension < 1:
            raise DimensionError(f"dimension must be positive, got {self.dimension}")

    def _support(self, rows: np.ndarray) -> np.ndarray:
        return self.radius * np.linalg.norm(rows, axis=1)

    def _gauge(self, rows: np.ndarray) -> np.ndarray:
        return np.linalg.norm(rows, axis=1) / self.radius


@dataclass(frozen=True, eq=False)
class SupportSampled(Body):
    """
    Body known through its support values on a direction grid. Off the grid it stands for its
    outer polyhedral model {x : <u_i, x> <= sigma_i for all i}.
    """

    grid: DirectionGrid
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.size,):
            raise DimensionError(
                f"expected {self.grid.size} support values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise DomainError("support values must be finite")
        if np.any(values + values[self.grid.antipodes] < -settings.abs_tol):
            raise DomainError("support values describe an empty set")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def dimension(self) -> int:
        return self.grid.dimension

    @cached_property
    def model_vertices(self) -> np.ndarray:
        """Vertices of the outer polyhedral model"""
        directions = self.grid.directions
        if self.dimension == 1:
            return np.array([[-self.values[1]], [self.values[0]]])
        center, radius = chebyshev_center(directions, self.values)
        if radius <= settings.abs_tol:
            raise DegeneracyError("support model has empty interior")
        halfspaces = np.hstack([directions, -self.values[:, None]])
        try:
            vertices = HalfspaceIntersection(halfspaces, center).intersections
        except QhullError as e:
            message = f"support model cannot be intersected: {e}".splitlines()[0]
            raise UnboundednessError(message)
        if not np.all(np.isfinite(vertices)):
            raise UnboundednessError("support model is unbounded")
        return unique_rows(vertices)

    @cached_property
    def facet_matrix(self) -> np.ndarray:
        if np.any(self.values <= settings.abs_tol):
            raise DomainError("origin is not an interior point of the support model")
        return self.grid.directions / self.values[:, None]

    def _support(self, rows: np.ndarray) -> np.ndarray:
        norms = np.linalg.norm(rows, axis=1)
        cosines = (rows / norms[:, None]) @ self.grid.directions.T
        best = np.argmax(cosines, axis=1)
        on_grid = cosines[np.arange(rows.shape[0]), best] > 1.0 - 1e-12
        out = np.empty(rows.shape[0])
        out[on_grid] = norms[on_grid] * self.values[best[on_grid]]
        if np.any(~on_grid):
            out[~on_grid] = support_of_points(self.model_vertices, rows[~on_grid])
        return out

    def _gauge(self, rows: np.ndarray) -> np.ndarray:
        return np.maximum(support_of_points(self.facet_matrix, rows), 0.0)


@dataclass(frozen=True, eq=False)
class LevelSet(Body):
    """
    Sublevel set {x : f(x) <= level} of a quadratic gauge f = p_C^2 / 2. It equals
    sqrt(2 level) C, so p(x) = sqrt(f(x) / level) and sigma(u) = 2 sqrt(level f*(u)).
    """

    energy: "QuadGauge"  # noqa: F821
    level: float = 0.5

    def __post_init__(self):
        if not np.isfinite(self.level) or self.level <= 0:
            raise DomainError(f"level must be positive, got {self.level}")

    @property
    def dimension(self) -> int:
        return self.energy.dimension

    def _support(self, rows: np.ndarray) -> np.ndarray:
        return 2.0 * np.sqrt(self.level * np.maximum(self.energy._conjugate(rows), 0.0))

    def _gauge(self, rows: np.ndarray) -> np.ndarray:
        return np.sqrt(np.maximum(self.energy._value(rows), 0.0) / self.level)


@dataclass(frozen=True, eq=False)
class PolarOf(Body):
    """Polar body, answered by swapping the support and gauge of the wrapped body"""

    body: Body

    @property
    def dimension(self) -> int:
        return self.body.dimension

    def _support(self, rows: np.ndarray) -> np.ndarray:
        return self.body._gauge(rows)

    def _gauge(self, rows: np.ndarray) -> np.ndarray:
        return self.body._support(rows)
