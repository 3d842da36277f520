import numpy as np
import pytest

from convex_rounder.models.body import Ball
from convex_rounder.models.grid import build_grid
from convex_rounder.operations.presets import cross, cube, random_polytope, simplex


@pytest.fixture
def square():
    return cube(2)


@pytest.fixture
def diamond():
    return cross(2)


@pytest.fixture
def triangle():
    return simplex(2)


@pytest.fixture
def unit_ball():
    return Ball(1.0, 2)


@pytest.fixture(scope="session")
def grid2():
    return build_grid(2, 720)


@pytest.fixture(scope="session")
def coarse_grid2():
    return build_grid(2, 180)


@pytest.fixture(scope="session")
def grid3():
    return build_grid(3, 2048)


def random_bodies(count: int, dimension: int = 2, vertices: int = 10, offset: int = 0) -> list:
    seeds = range(offset, offset + count)
    return [random_polytope(seed, vertices, dimension) for seed in seeds]


def unit_vectors(seed: int, count: int, dimension: int) -> np.ndarray:
    samples = np.random.default_rng(seed).standard_normal((count, dimension))
    return samples / np.linalg.norm(samples, axis=1)[:, None]
