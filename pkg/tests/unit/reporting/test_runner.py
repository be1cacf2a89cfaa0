"""
Unit tests for subcommand execution.

Tests cover:
- solve-torsion on the disk and on the radial ball
- verify-el certificates for the quadratic case
- beurling level-set and norm tables
- cm-scan centre table
- Usage errors for domains that do not fit the subcommand
- Numeric failures turned into verdict "fail"
"""

from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from src.geometry.mesh import build_half_disk_mesh, write_mesh_text
from src.reporting.envelope import (
    EXIT_NUMERIC_FAILURE,
    EXIT_OK,
    ReportEnvelope,
    validate_envelope,
)
from src.reporting.exceptions import UsageError
from src.reporting.runner import run
from src.trace.scan import Verdict
from tests.helpers.builders import RunConfigBuilder


def _table(envelope: ReportEnvelope, name: str) -> pd.DataFrame:
    return next(artifact.table for artifact in envelope.tables if artifact.name == name)


class TestSolveTorsion:
    def test_disk_passes(self, tmp_path: Path) -> None:
        config = RunConfigBuilder().domain("disk").refinement(2).output_dir(tmp_path).build()

        envelope = run(config)

        assert envelope.verdicts == {"solve_torsion": Verdict.PASS}
        result = envelope.results[0]
        assert result["converged"]
        assert "radial_oracle_error" in result
        assert set(_table(envelope, "torsion_gradients").columns) == {
            "radius",
            "grad_norm",
            "oracle",
        }
        assert envelope.timings["solve-torsion"] >= 0.0
        validate_envelope(envelope.to_dict())

    def test_ball_uses_radial_profile(self, tmp_path: Path) -> None:
        config = RunConfigBuilder().dimension(3).exponent(1.5).output_dir(tmp_path).build()

        envelope = run(config)

        assert envelope.verdicts == {"radial_trace_function": Verdict.PASS}
        assert envelope.results[0]["boundary_flux"] == pytest.approx(1.0, abs=1e-12)
        assert envelope.exit_code == EXIT_OK


class TestVerifyEl:
    def test_quadratic_case_passes_every_check(self, tmp_path: Path) -> None:
        config = (
            RunConfigBuilder()
            .command("verify-el")
            .domain("disk")
            .refinement(2)
            .output_dir(tmp_path)
            .build()
        )

        envelope = run(config)

        result = envelope.results[0]
        assert all(result["checks"].values()), result["checks"]
        assert envelope.verdicts["verify_el"] is Verdict.PASS
        assert not envelope.diagnostics


class TestBeurling:
    def test_levels_and_norms(self, tmp_path: Path) -> None:
        config = (
            RunConfigBuilder()
            .command("beurling")
            .a_values(0.5, 0.9)
            .samples(2**16)
            .check_norm()
            .export_boundary()
            .output_dir(tmp_path)
            .build()
        )

        envelope = run(config)

        assert envelope.verdicts == {"beurling_levels": Verdict.PASS, "beurling_norm": Verdict.PASS}
        levels = _table(envelope, "beurling_levels")
        assert len(levels) == 10
        assert np.all(levels["normalized_measure"] <= levels["bound"])
        names = {artifact.name for artifact in envelope.tables}
        assert {"beurling_boundary_a0.5", "beurling_boundary_a0.9"} <= names


class TestCmScan:
    def test_centre_table_matches_graded_quadrature(self, tmp_path: Path) -> None:
        config = (
            RunConfigBuilder()
            .command("cm-scan")
            .a_values(0.5, 0.9)
            .samples(2**16)
            .output_dir(tmp_path)
            .build()
        )

        envelope = run(config)

        centre = _table(envelope, "cm_centre")
        np.testing.assert_allclose(centre["a"], [0.5, 0.9])
        np.testing.assert_allclose(centre["graded_cm_integral"], centre["cm_integral"], rtol=1e-8)
        assert envelope.results[0]["kind"] == "scan"


class TestUsageErrors:
    def test_trace_scan_needs_planar_domain(self, tmp_path: Path) -> None:
        config = (
            RunConfigBuilder()
            .command("trace-scan")
            .dimension(3)
            .exponent(1.5)
            .output_dir(tmp_path)
            .build()
        )

        with pytest.raises(UsageError) as excinfo:
            run(config)

        assert excinfo.value.field == "domain"

    def test_sharpness_needs_trace_segment(self, tmp_path: Path) -> None:
        config = (
            RunConfigBuilder()
            .command("sharpness")
            .domain("disk")
            .r_values(0.1, 0.01)
            .output_dir(tmp_path)
            .build()
        )

        with pytest.raises(UsageError, match="'trace' boundary segment"):
            run(config)


class TestNumericFailures:
    def test_coarse_mesh_file_fails_moser_norm(self, tmp_path: Path) -> None:
        """
        GIVEN a mesh file too coarse for the requested radii
        WHEN moser-norm runs on it
        THEN the envelope carries verdict "fail" and a diagnostic instead of raising
        """
        mesh_file = write_mesh_text(build_half_disk_mesh(1), tmp_path / "coarse.mesh")
        config = (
            RunConfigBuilder()
            .command("moser-norm")
            .domain("mesh", mesh_file)
            .r_values(0.1, 0.01)
            .output_dir(tmp_path)
            .build()
        )

        envelope = run(config)

        assert envelope.verdicts == {"moser-norm": Verdict.FAIL}
        assert envelope.diagnostics[0].startswith("UnderResolvedMeshError")
        assert envelope.exit_code == EXIT_NUMERIC_FAILURE
        validate_envelope(envelope.to_dict())
