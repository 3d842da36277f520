import numpy as np
import pytest
from pydantic import ValidationError

from convex_rounder.exceptions import BudgetError
from convex_rounder.models.body import Ball, LevelSet
from convex_rounder.models.energy import SmoothedGauge
from convex_rounder.models.reports import IterationStep, IterationTrace
from convex_rounder.operations.certificates import smooth_certificate, strict_certificate
from convex_rounder.operations.geometry import hausdorff, support
from convex_rounder.operations.presets import cube, random_polytope, simplex
from convex_rounder.operations.rounding import RoundingConfig, asplund_round, containment_scale
from convex_rounder.operations.rounding import smoothify, strictify, strictify_constant
from convex_rounder.schemas import GridSpec


def test_config_defaults_follow_settings():
    cfg = RoundingConfig()
    assert cfg.epsilon == 0.1
    assert cfg.reg_weight == 0.1
    assert cfg.tol == 1e-6
    assert cfg.max_iter == 200


@pytest.mark.parametrize("field", ["epsilon", "reg_weight", "tol"])
def test_config_rejects_non_positive_values(field):
    with pytest.raises(ValidationError):
        RoundingConfig(**{field: 0.0})


def test_strictify_ball():
    result = strictify(Ball(1.0, 2), RoundingConfig(reg_weight=0.1))
    assert isinstance(result, Ball)
    assert result.radius == pytest.approx(1 / np.sqrt(1.1))


def test_smoothify_ball():
    result = smoothify(Ball(1.0, 3), RoundingConfig(reg_weight=0.1))
    assert isinstance(result, Ball)
    assert result.radius == pytest.approx(np.sqrt(1.1))


def test_strictify_stays_inside(square, grid2):
    result = strictify(square, RoundingConfig(reg_weight=0.1))
    assert isinstance(result, LevelSet)
    directions = grid2.directions
    assert np.all(support(result, directions) <= support(square, directions) + 1e-9)


def test_smoothify_contains_the_body(square, grid2):
    result = smoothify(square, RoundingConfig(reg_weight=0.1))
    assert containment_scale(square, result, grid2) <= 1 + 1e-9


def test_strictify_improves_as_the_weight_shrinks(square, coarse_grid2):
    distances = [
        hausdorff(strictify(square, RoundingConfig(reg_weight=eps)), square, coarse_grid2)
        for eps in (0.4, 0.2, 0.1, 0.05)
    ]
    assert all(later < earlier for earlier, later in zip(distances, distances[1:]))
    constant = strictify_constant(
        square, strictify(square, RoundingConfig(reg_weight=0.1)), 0.1, coarse_grid2
    )
    assert constant > 0


def test_rounding_fixes_the_euclidean_ball(grid2):
    result = asplund_round(Ball(1.0, 2), RoundingConfig(epsilon=0.5))
    assert result.trace.converged
    values = support(result.body, grid2.directions)
    assert np.ptp(values) < 1e-7
    assert result.halvings == 0
    assert strict_certificate(result.dual_body, grid=grid2).value > 0


def assert_rounded(body, result, cfg, grid):
    gaps = result.trace.gaps
    assert result.trace.converged
    assert len(gaps) <= cfg.max_iter + 1
    assert all(later <= earlier * (1 + 1e-12) for earlier, later in zip(gaps, gaps[1:]))
    assert all(step.ok for step in result.trace.steps)
    assert result.inner_outer_distance < cfg.epsilon
    assert hausdorff(body, result.body, grid) < cfg.epsilon + 1e-6
    assert strict_certificate(result.body, grid=grid).value > 0
    assert smooth_certificate(result.body).value < 1e-3
    assert strict_certificate(result.dual_body, grid=grid).value > 0


@pytest.mark.slow
def test_rounding_square(square, grid2):
    cfg = RoundingConfig(epsilon=0.1, tol=1e-6)
    assert_rounded(square, asplund_round(square, cfg), cfg, grid2)


@pytest.mark.slow
@pytest.mark.parametrize("body", [simplex(2), random_polytope(seed=3, vertices=8)], ids=str)
def test_rounding_other_polygons(body, grid2):
    cfg = RoundingConfig()
    assert_rounded(body, asplund_round(body, cfg), cfg, grid2)


def test_rounded_body_lies_inside_the_limit_polyhedron(diamond):
    cfg = RoundingConfig(epsilon=0.5, grid=GridSpec(n=180))
    result = asplund_round(diamond, cfg)
    energy = result.body.energy
    assert isinstance(energy, SmoothedGauge)
    assert isinstance(result.dual_body.energy, SmoothedGauge)
    assert energy.power >= 1024.0
    directions = energy.grid.directions
    assert np.all(support(result.body, directions) <= energy.offsets + 1e-9)
    assert hausdorff(diamond, result.body, energy.grid) < cfg.epsilon


@pytest.mark.slow
def test_rounding_cube_is_smooth_and_strict():
    cfg = RoundingConfig(epsilon=0.5, grid=GridSpec(n=256))
    body = cube(3)
    result = asplund_round(body, cfg)
    assert result.trace.converged
    assert hausdorff(body, result.body, cfg.build_grid(3)) < cfg.epsilon
    assert smooth_certificate(result.body).value < 1e-3
    assert strict_certificate(result.body, grid=cfg.build_grid(3)).value > 0
    assert strict_certificate(result.dual_body, grid=cfg.build_grid(3)).value > 0


def test_rounding_reports_exhausted_budget(square):
    with pytest.raises(BudgetError):
        asplund_round(square, RoundingConfig(epsilon=1e-6, max_halvings=0))


def test_trace_rate_and_csv():
    trace = IterationTrace(
        steps=[
            IterationStep(
                iter=i,
                gap=0.5**i,
                monotone_upper_ok=True,
                monotone_lower_ok=True,
                sandwich_ok=True,
            )
            for i in range(3)
        ],
        converged=True,
    )
    assert trace.rate == pytest.approx(0.5)
    lines = trace.to_csv().splitlines()
    assert lines[0] == "iter,gap,monotone_upper_ok,monotone_lower_ok,sandwich_ok"
    assert lines[2] == "1,0.5,true,true,true"
    assert len(lines) == 4
