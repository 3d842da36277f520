import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from convex_rounder.exceptions import DimensionError, SpecError
from convex_rounder.models.grid import DirectionGrid, _fibonacci_sphere, build_grid


def assert_valid(grid: DirectionGrid):
    np.testing.assert_allclose(np.linalg.norm(grid.directions, axis=1), 1.0, atol=1e-12)
    np.testing.assert_allclose(grid.directions[grid.antipodes], -grid.directions, atol=1e-12)
    assert len(set(grid.antipodes.tolist())) == grid.size


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=2, max_value=500))
def test_planar_grid_is_symmetric_for_any_size(n):
    grid = build_grid(2, n)
    assert grid.size == n + n % 2
    assert_valid(grid)


def test_planar_grid_contains_axes_and_diagonals():
    directions = build_grid(2, 720).directions
    for target in ([1, 0], [0, 1], [-1, 0], [np.sqrt(0.5), np.sqrt(0.5)]):
        assert np.min(np.linalg.norm(directions - target, axis=1)) < 1e-12


def test_planar_angles_are_uniform():
    grid = build_grid(2, 16)
    np.testing.assert_allclose(np.sort(grid.angles), 2 * np.pi * np.arange(16) / 16, atol=1e-12)


def test_line_grid():
    grid = build_grid(1)
    np.testing.assert_array_equal(grid.directions, [[1.0], [-1.0]])


@pytest.mark.parametrize("dimension", [3, 4, 5])
def test_spatial_grids_are_valid(dimension):
    grid = build_grid(dimension, 400, seed=3)
    assert grid.size == 400
    assert_valid(grid)


def test_spatial_grid_is_reproducible_from_seed():
    first = build_grid(3, 256, seed=11).directions
    np.testing.assert_array_equal(first, build_grid(3, 256, seed=11).directions)
    assert not np.allclose(first, build_grid(3, 256, seed=12).directions)


def test_fibonacci_grid_covers_the_sphere():
    directions = build_grid(3, 2048).directions
    samples = np.random.default_rng(0).standard_normal((500, 3))
    samples /= np.linalg.norm(samples, axis=1)[:, None]
    # every sample is within a few grid spacings of a grid direction
    assert np.min(np.max(samples @ directions.T, axis=1)) > np.cos(0.1)


def test_fibonacci_lattice_spans_both_hemispheres():
    points = _fibonacci_sphere(64)
    np.testing.assert_allclose(np.linalg.norm(points, axis=1), 1.0, atol=1e-12)
    assert np.sum(points[:, 2] > 0) == np.sum(points[:, 2] < 0) == 32
    assert points[:, 2].max() > 0.95 and points[:, 2].min() < -0.95


def test_grid_rejects_non_unit_directions():
    with pytest.raises(SpecError):
        DirectionGrid(2, 2, 0, np.array([[2.0, 0.0], [-2.0, 0.0]]))


def test_grid_rejects_asymmetric_directions():
    with pytest.raises(SpecError):
        DirectionGrid(2, 2, 0, np.array([[1.0, 0.0], [0.0, 1.0]]))


def test_grid_rejects_bad_dimension():
    with pytest.raises(DimensionError):
        build_grid(0)
