import numpy as np
import pytest

from convex_rounder.exceptions import DomainError, SamplingError
from convex_rounder.models.body import Ball, LevelSet, Polytope
from convex_rounder.models.energy import Sampled
from convex_rounder.models.grid import build_grid
from convex_rounder.operations.certificates import cross_duality_check, diameter
from convex_rounder.operations.certificates import smooth_certificate, strict_certificate
from convex_rounder.operations.certificates import support_hyperplane
from convex_rounder.operations.geometry import boundary_points, gauge, recenter
from convex_rounder.operations.presets import cube, random_polytope
from convex_rounder.operations.rounding import RoundingConfig, smoothify, strictify
from tests.conftest import random_bodies, unit_vectors


def test_diameter_of_square(square, grid2):
    assert diameter(square, grid2) == pytest.approx(2 * np.sqrt(2.0))


def test_ball_is_strictly_convex(unit_ball):
    report = strict_certificate(unit_ball)
    assert report.passed
    assert report.value > 1e-3
    assert report.samples == 256


def test_square_is_not_strictly_convex(square):
    report = strict_certificate(square)
    assert abs(report.value) <= 1e-12
    assert not report.passed


def test_strict_value_is_never_below_zero():
    for body in random_bodies(5):
        assert strict_certificate(body, n_pairs=64).value >= -1e-12


def test_strictified_square_is_strictly_convex_and_monotone(square, coarse_grid2):
    bodies = [strictify(square, RoundingConfig(reg_weight=eps)) for eps in (0.05, 0.1, 0.2)]
    values = [strict_certificate(body, grid=coarse_grid2).value for body in bodies]
    assert values[0] > 0
    assert values[0] < values[1] < values[2]


def test_strict_certificate_needs_enough_pairs(square):
    with pytest.raises(SamplingError):
        strict_certificate(square, min_separation=10.0)


def test_strict_certificate_is_reproducible(square):
    first = strict_certificate(square, seed=3).model_dump()
    assert strict_certificate(square, seed=3).model_dump() == first


def test_report_serialises_pass_flag(unit_ball):
    document = strict_certificate(unit_ball).model_dump(by_alias=True)
    assert document["pass"] is True
    assert document["kind"] == "strict"
    assert "passed" not in document


def test_ball_is_smooth(unit_ball):
    report = smooth_certificate(unit_ball)
    assert report.passed
    assert report.value < 1e-6
    assert report.fd_step == 1e-4
    assert report.fd_order == 2


@pytest.mark.parametrize("order", [1, 2])
def test_square_is_not_smooth(square, order):
    report = smooth_certificate(square, order=order)
    assert not report.passed
    assert report.value > 0.1


def test_cross_vertex_kink_is_detected(diamond):
    report = smooth_certificate(diamond, points=[[1.0, 0.0]], probes=[[0.0, 1.0]])
    assert report.value >= 1.0
    assert report.samples == 1


def test_smoothified_square_is_smooth(square):
    report = smooth_certificate(smoothify(square, RoundingConfig(reg_weight=0.1)), fd_step=1e-4)
    assert report.value < 1e-3
    assert report.passed


def test_smooth_certificate_validates_its_stencil(unit_ball):
    with pytest.raises(DomainError):
        smooth_certificate(unit_ball, fd_step=0.0)
    with pytest.raises(DomainError):
        smooth_certificate(unit_ball, order=3)


def test_support_hyperplane_of_ball(unit_ball):
    u = support_hyperplane(unit_ball, [0.6, 0.8])
    np.testing.assert_allclose(u, [0.6, 0.8], atol=1e-6)


def test_support_hyperplane_on_square_facet(square):
    np.testing.assert_allclose(support_hyperplane(square, [1.0, 0.3]), [1.0, 0.0], atol=1e-9)


def test_support_hyperplane_at_square_vertex(square):
    u = support_hyperplane(square, [1.0, 1.0])
    assert u @ np.array([1.0, 1.0]) >= 1 - 1e-9
    assert np.max(square.hull_vertices @ u) <= 1 + 1e-9


def test_support_hyperplane_on_random_polytopes():
    for body in random_bodies(5, offset=20):
        for x in boundary_points(body, unit_vectors(12, 10, 2)):
            u = support_hyperplane(body, x)
            assert u @ x >= 1 - 1e-6
            assert np.max(body.hull_vertices @ u) <= 1 + 1e-9


def test_support_hyperplane_needs_a_boundary_point(square):
    with pytest.raises(DomainError):
        support_hyperplane(square, [0.5, 0.0])


def test_cross_duality_agrees(unit_ball, square):
    assert cross_duality_check(unit_ball) == 0.0
    assert cross_duality_check(square) == 0.0


def test_strictified_polar_is_smooth(diamond):
    # the polar of a strictly convex body is smooth
    body = smoothify(diamond, RoundingConfig(reg_weight=0.1))
    assert gauge(body, [1.0, 1.0]) < 2.0
    assert smooth_certificate(body, n_points=16, n_probe_dirs=4).passed


def test_certificates_need_interior_origin():
    shifted = Polytope(np.array([[1.0, 1.0], [2.0, 1.0], [1.0, 2.0]]))
    with pytest.raises(DomainError):
        strict_certificate(shifted)
    with pytest.raises(DomainError):
        smooth_certificate(shifted)


def test_strictified_square_keeps_its_kinks(square):
    body = strictify(square, RoundingConfig(reg_weight=0.1))
    report = smooth_certificate(body, n_points=8)
    assert not report.passed
    assert report.value > 0.1


def test_recentring_keeps_the_sign_of_strictness(square):
    moved = recenter(Polytope(square.vertices + 0.7)).body
    assert abs(strict_certificate(moved).value) <= 1e-12
    assert strict_certificate(strictify(moved, RoundingConfig())).passed


def test_report_csv_row(unit_ball):
    header, row = strict_certificate(unit_ball, n_pairs=32).to_csv().splitlines()
    assert header == "kind,value,threshold,pass,samples,min_separation,fd_step,fd_order,seed"
    cells = row.split(",")
    assert cells[0] == "strict"
    assert cells[3] == "true"
    assert cells[4] == "32"
    assert cells[6] == cells[7] == ""


@pytest.mark.parametrize("dimension", [2, 3])
def test_points_on_vertex_rays_are_nudged_along_the_boundary(dimension):
    body = cube(dimension)
    report = smooth_certificate(body, n_points=4, n_probe_dirs=4)
    assert not report.passed
    assert report.value > 0.1


def test_sampled_level_body_kinks_are_detected():
    grid = build_grid(3, 64)
    body = LevelSet(Sampled(grid, np.ones(grid.size)), 0.5)
    report = smooth_certificate(body, n_points=8)
    assert not report.passed
    assert report.value > 0.05


@pytest.mark.parametrize("order", [1, 2])
def test_smooth_gap_is_bounded_below_by_the_stencil_error(order, grid2):
    bodies = [Ball(0.7, 2)] + [
        smoothify(random_polytope(seed, 8), RoundingConfig(reg_weight=0.2)) for seed in range(3)
    ]
    for body in bodies:
        lipschitz = float(np.max(gauge(body, grid2.directions)))
        report = smooth_certificate(body, n_points=16, n_probe_dirs=4, order=order)
        assert report.value >= -4 * report.fd_step * lipschitz


def test_smooth_gap_never_grows_with_the_weight(diamond):
    values = [
        smooth_certificate(
            smoothify(diamond, RoundingConfig(reg_weight=weight)), fd_step=1e-3, order=1
        ).value
        for weight in (0.05, 0.1, 0.2, 0.4)
    ]
    assert all(later <= earlier * (1 + 1e-9) for earlier, later in zip(values, values[1:]))
