"""
Unit tests for the dimensional constants.

Tests cover:
- Γ via Lanczos against scipy at half-integer arguments
- Sphere measures (closed forms, two-step recurrence), ball volumes, α_n and β_n
- Sobolev conjugate and its admissible range
- DimensionConstants bundle
"""

import math

import pytest
from scipy.special import gamma

from src.geometry.constants import (
    DimensionConstants,
    interior_trace_gap_constant,
    lanczos_gamma,
    moser_constant,
    sobolev_conjugate,
    sphere_measure,
    trace_constant,
    unit_ball_volume,
)
from src.geometry.exceptions import DimensionError
from tests.helpers.assertions import assert_relative_close


class TestLanczosGamma:
    """Γ(x) accuracy on the arguments the lab uses."""

    @pytest.mark.parametrize("x", [0.5 * k for k in range(1, 21)])
    def test_matches_reference_at_half_integers(self, x: float) -> None:
        assert_relative_close(lanczos_gamma(x), float(gamma(x)), 1e-12)

    def test_reflection_below_one_half(self) -> None:
        assert_relative_close(lanczos_gamma(-0.5), -2.0 * math.sqrt(math.pi), 1e-12)

    def test_pole_raises(self) -> None:
        with pytest.raises(ValueError, match="pole"):
            lanczos_gamma(-2.0)


class TestSphereAndBall:
    def test_sphere_measure_low_dimensions(self) -> None:
        assert_relative_close(sphere_measure(2), 2.0 * math.pi, 1e-13)
        assert_relative_close(sphere_measure(3), 4.0 * math.pi, 1e-13)
        assert_relative_close(sphere_measure(4), 2.0 * math.pi**2, 1e-13)

    @pytest.mark.parametrize("n", range(3, 12))
    def test_sphere_measure_recurrence(self, n: int) -> None:
        """ω_n = 2π·ω_{n-2} / (n-1), one sphere up from two below."""
        assert_relative_close(
            sphere_measure(n + 1), 2.0 * math.pi * sphere_measure(n - 1) / (n - 1), 1e-11
        )

    def test_unit_ball_volume(self) -> None:
        assert_relative_close(unit_ball_volume(1), 2.0, 1e-13)
        assert_relative_close(unit_ball_volume(2), math.pi, 1e-13)
        assert_relative_close(unit_ball_volume(3), 4.0 * math.pi / 3.0, 1e-13)

    @pytest.mark.parametrize("n", [1, 0, 2.5])
    def test_rejects_invalid_dimension(self, n: float) -> None:
        with pytest.raises(DimensionError):
            sphere_measure(n)  # type: ignore[arg-type]


class TestInequalityConstants:
    """α_n, β_n and the conversion ceiling."""

    def test_planar_values(self) -> None:
        assert_relative_close(moser_constant(2), 4.0 * math.pi, 1e-13)
        assert_relative_close(trace_constant(2), math.pi, 1e-13)
        assert_relative_close(interior_trace_gap_constant(2), 2.0 * math.pi, 1e-13)

    def test_trace_constant_in_three_dimensions(self) -> None:
        """β_3 = 2(2π)^{1/2}."""
        assert_relative_close(trace_constant(3), 2.0 * math.sqrt(2.0 * math.pi), 1e-13)

    @pytest.mark.parametrize("n", [2, 3, 4, 7])
    def test_trace_constant_below_interior_constant(self, n: int) -> None:
        assert trace_constant(n) < moser_constant(n)


class TestSobolevConjugate:
    def test_value(self) -> None:
        assert sobolev_conjugate(1.5, 3) == pytest.approx(3.0)
        assert sobolev_conjugate(1.5, 2) == pytest.approx(6.0)

    @pytest.mark.parametrize("p", [1.0, 2.0, 3.5])
    def test_range(self, p: float) -> None:
        with pytest.raises(DimensionError):
            sobolev_conjugate(p, 2)


class TestDimensionConstants:
    def test_build_bundle(self) -> None:
        constants = DimensionConstants.build(3, 1.5)

        assert constants.n == 3
        assert constants.p_star == pytest.approx(3.0)
        assert constants.beta_n == pytest.approx(trace_constant(3))
        assert constants.critical_exponent == pytest.approx(1.5)
        assert set(constants.to_dict()) == {"n", "omega", "alpha_n", "beta_n", "p", "p_star"}

    def test_build_rejects_p_at_dimension(self) -> None:
        with pytest.raises(DimensionError):
            DimensionConstants.build(2, 2.0)
