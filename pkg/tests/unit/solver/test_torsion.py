"""
Unit tests for the trace-function solver.

Tests cover:
- Convergence and Euler–Lagrange certificates for p = 2, 1.5 and 1.2
- Zero-start and random-start minimizers agreeing in the energy norm
- Agreement between the three direction metrics
- Iteration cap reporting the best iterate
- Closed-form radial trace function and the disk oracle
"""

import math

import numpy as np
import pytest

from src.energy.p_energy import (
    EnergyConfig,
    MeshFunction,
    dirichlet_norm,
    domain_integral,
    energy,
)
from src.geometry.mesh import TriMesh, build_disk_mesh
from src.geometry.radial import RadialGrid
from src.solver.exceptions import IterationLimitError
from src.solver.torsion import (
    Preconditioner,
    SolveReport,
    boundary_flux_total,
    energy_roundoff,
    pointwise_flux_deviation,
    radial_oracle_error,
    radial_trace_derivative,
    radial_trace_function,
    solve_trace_function,
    variational_residual,
    weak_defect,
)
from tests.helpers.assertions import assert_mean_zero
from tests.helpers.builders import MeshFunctionBuilder

# =============================================================================
# FIXTURES
# =============================================================================


@pytest.fixture(scope="module")
def quadratic_report() -> SolveReport:
    return solve_trace_function(build_disk_mesh(3), EnergyConfig(p=2.0))


@pytest.fixture(scope="module")
def singular_report() -> SolveReport:
    return solve_trace_function(build_disk_mesh(3), EnergyConfig(p=1.5, n=3))


# =============================================================================
# CONVERGENCE
# =============================================================================


class TestQuadraticSolve:
    """p = 2: the lagged-diffusion step is an exact Newton step."""

    def test_single_iteration(self, quadratic_report: SolveReport) -> None:
        assert quadratic_report.converged
        assert quadratic_report.iterations == 1

    def test_certificates(self, quadratic_report: SolveReport) -> None:
        assert quadratic_report.interior_residual <= 2.0 * quadratic_report.tolerance / 2.0
        assert quadratic_report.boundary_flux_deviation <= 1e-6

    def test_default_tolerance_scales_with_perimeter(self, quadratic_report: SolveReport) -> None:
        mesh = quadratic_report.w.mesh

        assert quadratic_report.tolerance == pytest.approx(1e-8 * mesh.perimeter)


class TestSingularSolve:
    def test_converges_with_certificates(self, singular_report: SolveReport) -> None:
        w = singular_report.w

        assert singular_report.converged
        assert singular_report.interior_residual <= 2.0 * singular_report.tolerance / 1.5
        assert singular_report.boundary_flux_deviation <= 1e-6
        assert_mean_zero(domain_integral(w), w.mesh.area)

    def test_energy_never_increases(self, singular_report: SolveReport) -> None:
        energies = np.asarray(singular_report.energy_trace)
        slack = np.array([energy_roundoff(value) for value in energies[:-1]])

        assert energies[0] == 0.0
        assert np.all(energies[1:] <= energies[:-1] + slack)

    def test_minimizer_is_negative_energy(self, singular_report: SolveReport) -> None:
        assert singular_report.energy < 0.0
        assert singular_report.energy == pytest.approx(
            energy(singular_report.w, EnergyConfig(p=1.5, n=3)), rel=1e-14
        )

    def test_report_serializes_without_values(self, singular_report: SolveReport) -> None:
        payload = singular_report.to_dict()

        assert payload["preconditioner"] == "lagged_diffusion"
        assert payload["n_vertices"] == singular_report.w.mesh.n_vertices
        assert "w" not in payload


class TestStressExponent:
    """p = 1.2: the weight |∇w|^{-0.8} is large on the flat core of w."""

    @pytest.mark.parametrize("mesh_name", ["disk_mesh", "half_disk_mesh"])
    def test_converges_with_certificates(
        self, mesh_name: str, request: pytest.FixtureRequest
    ) -> None:
        mesh = request.getfixturevalue(mesh_name)

        report = solve_trace_function(mesh, EnergyConfig(p=1.2))

        assert report.converged
        assert report.projected_gradient_norm <= report.tolerance
        assert report.interior_residual <= 2.0 * report.tolerance / 1.2
        assert report.boundary_flux_deviation <= 1e-6
        assert report.energy < 0.0
        assert_mean_zero(domain_integral(report.w), mesh.area)

    def test_energy_never_increases(self, disk_mesh: TriMesh) -> None:
        report = solve_trace_function(disk_mesh, EnergyConfig(p=1.2))
        energies = np.asarray(report.energy_trace)
        slack = np.array([energy_roundoff(value) for value in energies[:-1]])

        assert np.all(energies[1:] <= energies[:-1] + slack)


class TestUniqueness:
    @pytest.mark.parametrize("p", [1.2, 1.5, 2.0])
    def test_random_start_reaches_same_minimizer(
        self, p: float, disk_mesh: TriMesh, rng: np.random.Generator
    ) -> None:
        """
        GIVEN the zero start and a random mean-zero start
        WHEN both are solved to the default tolerance
        THEN the minimizers differ by at most 10·tol in ‖∇·‖_{L^p}
        """
        cfg = EnergyConfig(p=p)
        start = MeshFunctionBuilder(disk_mesh).random(rng).build()

        first = solve_trace_function(disk_mesh, cfg)
        second = solve_trace_function(disk_mesh, cfg, u0=start)

        assert first.converged and second.converged
        assert dirichlet_norm(first.w - second.w, p) <= 10.0 * first.tolerance


class TestPreconditioners:
    @pytest.mark.parametrize("preconditioner", [Preconditioner.NONE, Preconditioner.LUMPED_MASS])
    def test_metrics_agree(
        self, coarse_disk: TriMesh, quadratic_cfg: EnergyConfig, preconditioner: Preconditioner
    ) -> None:
        reference = solve_trace_function(coarse_disk, quadratic_cfg)

        report = solve_trace_function(coarse_disk, quadratic_cfg, preconditioner=preconditioner)

        difference = report.w - reference.w
        assert report.converged
        assert report.iterations > 1
        assert dirichlet_norm(difference, 2.0) <= 1e-5

    def test_accepts_string_names(self, coarse_disk: TriMesh, quadratic_cfg: EnergyConfig) -> None:
        report = solve_trace_function(coarse_disk, quadratic_cfg, preconditioner="lumped_mass")

        assert report.preconditioner is Preconditioner.LUMPED_MASS


class TestIterationLimit:
    def test_cap_carries_best_iterate(
        self, coarse_disk: TriMesh, singular_cfg: EnergyConfig
    ) -> None:
        with pytest.raises(IterationLimitError) as excinfo:
            solve_trace_function(coarse_disk, singular_cfg, max_iterations=0)

        report = excinfo.value.report
        assert report is not None
        assert report.iterations == 0
        assert not report.converged
        assert report.energy == 0.0

    def test_rejects_non_positive_tolerance(
        self, coarse_disk: TriMesh, singular_cfg: EnergyConfig
    ) -> None:
        with pytest.raises(ValueError, match="tol"):
            solve_trace_function(coarse_disk, singular_cfg, tol=0.0)


# =============================================================================
# CERTIFICATES
# =============================================================================


class TestCertificates:
    def test_weak_defect_of_zero_function(
        self, coarse_disk: TriMesh, singular_cfg: EnergyConfig
    ) -> None:
        """At u = 0 the defect is (|∂Ω|/|Ω|)·m − b."""
        defect = weak_defect(MeshFunction.zeros(coarse_disk), singular_cfg)

        expected = (
            coarse_disk.perimeter / coarse_disk.area * coarse_disk.lumped_mass
            - coarse_disk.boundary_mass()
        )
        np.testing.assert_allclose(defect, expected, atol=1e-14)
        assert variational_residual(
            MeshFunction.zeros(coarse_disk), singular_cfg
        ) == pytest.approx(np.max(np.abs(expected)))

    def test_consistent_flux_matches_perimeter(self, singular_report: SolveReport) -> None:
        w = singular_report.w
        cfg = EnergyConfig(p=1.5, n=3)

        assert boundary_flux_total(w, cfg) == pytest.approx(w.mesh.perimeter, rel=1e-6)

    def test_pointwise_flux_is_diagnostic(self, singular_report: SolveReport) -> None:
        deviation = pointwise_flux_deviation(singular_report.w, EnergyConfig(p=1.5, n=3))

        assert math.isfinite(deviation)
        assert deviation == singular_report.pointwise_flux_deviation


# =============================================================================
# RADIAL ORACLE
# =============================================================================


class TestRadialTraceFunction:
    @pytest.mark.parametrize("n, p", [(2, 1.5), (3, 1.5), (3, 2.0), (5, 3.0)])
    def test_unit_flux_and_zero_mean(self, n: int, p: float) -> None:
        grid = RadialGrid.uniform(n, 1.0, intervals=256)

        profile = radial_trace_function(n, p, 1.0, grid)

        assert profile.boundary_flux(p) == pytest.approx(1.0, abs=1e-12)
        assert abs(profile.mean()) < 1e-4

    def test_derivative_closed_form(self) -> None:
        rho = np.array([0.0, 0.25, 1.0])

        np.testing.assert_allclose(radial_trace_derivative(rho, 1.5), [0.0, 0.0625, 1.0])

    def test_grid_must_match(self) -> None:
        grid = RadialGrid.uniform(2, 1.0, intervals=8)

        with pytest.raises(ValueError, match="grid is for"):
            radial_trace_function(3, 1.5, 1.0, grid)

    def test_rejects_p_at_one(self) -> None:
        with pytest.raises(ValueError, match="p must be > 1"):
            radial_trace_function(3, 1.0, 1.0, RadialGrid.uniform(3))


@pytest.mark.slow
class TestDiskOracle:
    """Refinement study of |∇w| against (|x|)^{1/(p-1)} on the unit disk."""

    def test_error_small_and_decreasing(self) -> None:
        cfg = EnergyConfig(p=1.5, n=3)
        errors = [
            radial_oracle_error(solve_trace_function(build_disk_mesh(level), cfg).w, 1.5)
            for level in (4, 5)
        ]

        assert errors[1] <= 0.03
        assert 1.5 <= errors[0] / errors[1] <= 2.5
