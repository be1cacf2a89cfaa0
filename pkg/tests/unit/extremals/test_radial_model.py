"""
Unit tests for the half-space radial model of the concentrating sequence.

Tests cover:
- Graded profile and grid compatibility
- Exact Dirichlet norms against the closed form in n = 2, 3, 4
- Sharpness verdicts on both sides of β_3
- Fitted growth exponent for very small radii
"""

import math

import numpy as np
import pytest

from src.extremals.moser import SHARPNESS_COLUMNS, moser_norm_predicted
from src.extremals.radial_model import (
    radial_moser_norm,
    radial_moser_profile,
    radial_sharpness_experiment,
)
from src.geometry.constants import trace_constant, unit_ball_volume
from src.geometry.radial import RadialGrid
from src.trace.scan import Verdict
from tests.helpers.assertions import assert_relative_close

RADII = (1e-1, 1e-2, 1e-3, 1e-4)


class TestRadialProfile:
    def test_radius_is_grid_node(self) -> None:
        profile = radial_moser_profile(1e-3, 3)

        assert 1e-3 in profile.grid.nodes
        assert profile.values[0] == 1.0
        assert profile.boundary_value() == 0.0

    def test_grid_must_be_unit_ball_of_same_dimension(self) -> None:
        with pytest.raises(ValueError, match="grid is for"):
            radial_moser_profile(0.1, 3, RadialGrid.uniform(2, 1.0))


class TestRadialNorm:
    @pytest.mark.parametrize("n", [2, 3, 4])
    @pytest.mark.parametrize("r", [0.1, 1e-3, 1e-6])
    def test_matches_closed_form(self, n: int, r: float) -> None:
        assert_relative_close(radial_moser_norm(r, n), moser_norm_predicted(r, n), 0.01)


class TestRadialSharpness:
    def test_blow_up_above_trace_constant(self) -> None:
        report = radial_sharpness_experiment(1.2 * trace_constant(3), RADII, 3)

        assert report.name == "radial_sharpness_n3"
        assert report.verdict is Verdict.BLOW_UP
        assert list(report.table.columns) == SHARPNESS_COLUMNS
        assert report.baseline == pytest.approx(math.pi)

    def test_bounded_below_trace_constant(self) -> None:
        report = radial_sharpness_experiment(0.5 * trace_constant(3), RADII, 3, max_workers=2)

        assert report.verdict is Verdict.BOUNDED

    def test_members_are_normalized(self) -> None:
        report = radial_sharpness_experiment(trace_constant(3), RADII, 3)

        np.testing.assert_allclose(report.column("grad_norm"), 1.0, rtol=1e-12)
        np.testing.assert_allclose(report.column("mean"), 0.0, atol=1e-12)

    def test_planar_model_baseline(self) -> None:
        report = radial_sharpness_experiment(0.5 * math.pi, [0.1], 2)

        assert report.baseline == pytest.approx(unit_ball_volume(1))
        assert "fitted_exponent" not in report.details


@pytest.mark.slow
class TestGrowthExponentRegression:
    """log T against log(1/r) for r = 10^{-10}, ..., 10^{-60}."""

    def test_fitted_exponent_matches_prediction(self) -> None:
        radii = [10.0**-k for k in range(10, 61, 10)]

        report = radial_sharpness_experiment(1.2 * trace_constant(3), radii, 3)

        predicted = report.details["predicted_exponent"]
        assert predicted == pytest.approx(0.4)
        assert_relative_close(report.details["fitted_exponent"], predicted, 0.15)
        assert report.details["growth_verdict"] == "blow-up"
