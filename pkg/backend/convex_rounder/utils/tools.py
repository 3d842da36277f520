"""
filename: tools.py
description: Module for the definitions of reusable numeric helpers shared by models and
    operations.
"""

import numpy as np
from scipy.optimize import linprog

from convex_rounder.exceptions import DimensionError, DomainError, UnboundednessError

# rows per block when reducing a (directions x points) product
_CHUNK = 4096


def as_rows(values, dimension: int) -> tuple[np.ndarray, bool]:
    """
    Coerce a single vector or a stack of vectors into a 2D float array.

    :param values: (array-like) shape (d,) or (m, d).
    :param dimension: (int) expected ambient dimension d.
    :return: (tuple) the (m, d) array and a flag telling whether a single vector was given.
    """
    array = np.asarray(values, dtype=float)
    single = array.ndim == 1
    rows = np.atleast_2d(array)
    if rows.ndim != 2 or rows.shape[1] != dimension:
        raise DimensionError(
            f"expected vectors of dimension {dimension}, got shape {array.shape}"
        )
    if not np.all(np.isfinite(rows)):
        raise DomainError("vectors must have finite coordinates")
    return rows, single


def unwrap(values: np.ndarray, single: bool):
    """Return a python float for single-vector queries and the array otherwise"""
    return float(values[0]) if single else values


def unit_rows(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """
    Normalise every row to Euclidean length one.

    :param rows: (np.ndarray) shape (m, d), no zero rows allowed.
    :return: (tuple) unit rows and the original norms.
    """
    norms = np.linalg.norm(rows, axis=1)
    if np.any(norms == 0.0):
        raise DomainError("direction must be nonzero")
    return rows / norms[:, None], norms


def scaled_norm(vector: np.ndarray) -> float:
    """Euclidean norm of a vector, free of underflow for tiny entries"""
    top = float(np.max(np.abs(vector)))
    if top == 0.0:
        return 0.0
    return top * float(np.linalg.norm(vector / top))


def support_of_points(points: np.ndarray, directions: np.ndarray) -> np.ndarray:
    """
    Support function of the convex hull of a finite point set: max_k <u, v_k> for each u.

    :param points: (np.ndarray) shape (k, d).
    :param directions: (np.ndarray) shape (m, d).
    :return: (np.ndarray) shape (m,).
    """
    out = np.empty(directions.shape[0])
    for start in range(0, directions.shape[0], _CHUNK):
        block = directions[start : start + _CHUNK]
        out[start : start + _CHUNK] = np.max(block @ points.T, axis=1)
    return out


def unique_rows(rows: np.ndarray, decimals: int = 12) -> np.ndarray:
    """Drop rows that coincide up to <decimals> digits, keeping first occurrences in order"""
    _, index = np.unique(np.round(rows, decimals), axis=0, return_index=True)
    return rows[np.sort(index)]


def chebyshev_center(normals: np.ndarray, offsets: np.ndarray) -> tuple[np.ndarray, float]:
    """
    Centre and radius of the largest ball inscribed in {x : <n_i, x> <= b_i}.

    Linear program over (z, r): maximise r subject to <n_i, z> + |n_i| r <= b_i, r >= 0.

    :param normals: (np.ndarray) shape (k, d).
    :param offsets: (np.ndarray) shape (k,).
    :return: (tuple) centre z and radius r.
    """
    count, dimension = normals.shape
    cost = np.zeros(dimension + 1)
    cost[-1] = -1.0
    a_ub = np.hstack([normals, np.linalg.norm(normals, axis=1)[:, None]])
    bounds = [(None, None)] * dimension + [(0, None)]
    result = linprog(cost, A_ub=a_ub, b_ub=offsets, bounds=bounds, method="highs")
    if result.status == 3:
        raise UnboundednessError("half-space model is unbounded; no Chebyshev centre")
    if not result.success:
        raise DomainError(f"Chebyshev centre program failed: {result.message}")
    return result.x[:dimension], float(result.x[-1])


def random_unit_vectors(rng: np.random.Generator, count: int, dimension: int) -> np.ndarray:
    """Draw <count> directions uniformly on the unit sphere of R^dimension"""
    samples = rng.standard_normal((count, dimension))
    norms = np.linalg.norm(samples, axis=1)
    # redraw exact zeros
    while np.any(norms == 0.0):
        bad = norms == 0.0
        samples[bad] = rng.standard_normal((int(bad.sum()), dimension))
        norms = np.linalg.norm(samples, axis=1)
    return samples / norms[:, None]


def tangent_basis(direction: np.ndarray) -> np.ndarray:
    """Orthonormal basis (rows) of the hyperplane orthogonal to a unit vector"""
    _, _, vh = np.linalg.svd(direction[None, :])
    return vh[1:]
