"""
Unit tests for run configuration and environment settings.

Tests cover:
- RunConfig defaults, field validation and cross-field rules
- Domain and alpha resolution per subcommand
- JSON echo of the config
- LabSettings from TRACELAB_* variables and .env files
"""

import math
from pathlib import Path

import pytest
from pydantic import ValidationError

from src.config.run_config import Command, Domain, RunConfig
from src.config.settings import LabSettings
from src.geometry.constants import trace_constant
from tests.helpers.builders import RunConfigBuilder


class TestRunConfigValidation:
    def test_defaults(self) -> None:
        config = RunConfig(command="beurling")

        assert config.command is Command.BEURLING
        assert config.p == 2.0
        assert config.a_values == (0.9, 0.99, 0.999, 0.9999)
        assert config.samples == 2**16

    def test_unknown_key_rejected(self) -> None:
        with pytest.raises(ValidationError, match="extra"):
            RunConfig(command="beurling", colour="blue")

    @pytest.mark.parametrize(
        "field, value",
        [
            ("p", 1.0),
            ("p", float("inf")),
            ("n", 1),
            ("refinement", 9),
            ("samples", 1000),
            ("samples", 8),
            ("tol", 0.0),
            ("max_workers", 0),
        ],
    )
    def test_out_of_range(self, field: str, value: object) -> None:
        with pytest.raises(ValidationError) as excinfo:
            RunConfig(command="solve-torsion", **{field: value})

        assert excinfo.value.errors()[0]["loc"][0] == field

    @pytest.mark.parametrize("values", [(), (0.5, 1.0), (0.0,), (float("nan"),)])
    def test_radii_in_unit_interval(self, values: tuple[float, ...]) -> None:
        with pytest.raises(ValidationError, match="r_values"):
            RunConfig(command="sharpness", r_values=values)

    def test_alpha_and_multiple_are_exclusive(self) -> None:
        with pytest.raises(ValidationError, match="either alpha or alpha_mult"):
            RunConfigBuilder().command("sharpness").alpha(1.0).alpha_mult(1.2).build()

    def test_mesh_domain_needs_file(self) -> None:
        with pytest.raises(ValidationError, match="mesh_file"):
            RunConfigBuilder().domain("mesh").build()

    def test_mesh_file_must_exist(self, tmp_path: Path) -> None:
        missing = tmp_path / "missing.mesh"

        with pytest.raises(ValidationError, match="no such mesh file") as excinfo:
            RunConfigBuilder().domain("mesh", missing).build()

        assert excinfo.value.errors()[0]["loc"] == ("mesh_file",)

    def test_higher_dimension_needs_ball(self) -> None:
        with pytest.raises(ValidationError, match="needs domain 'ball'"):
            RunConfigBuilder().dimension(3).exponent(1.5).domain("disk").build()

    def test_holder_exponent_below_dimension(self) -> None:
        with pytest.raises(ValidationError, match="holder_p"):
            RunConfigBuilder().command("trace-scan").holder_p(2.0).build()

    def test_frozen(self) -> None:
        config = RunConfigBuilder().build()

        with pytest.raises(ValidationError):
            config.p = 3.0  # type: ignore[misc]


class TestResolution:
    def test_sharpness_defaults(self) -> None:
        config = RunConfigBuilder().command("sharpness").build()

        assert config.resolved_domain() is Domain.HALF_DISK
        assert config.resolved_alpha() == pytest.approx(1.2 * math.pi)

    def test_dimension_three_uses_ball(self) -> None:
        config = RunConfigBuilder().command("sharpness").dimension(3).exponent(1.5).build()

        assert config.resolved_domain() is Domain.BALL
        assert config.resolved_alpha() == pytest.approx(1.2 * trace_constant(3))

    @pytest.mark.parametrize(
        "command, expected",
        [("cm-scan", 1.1), ("conversion-check", 0.1), ("solve-torsion", 0.5 * math.pi)],
    )
    def test_command_alpha_defaults(self, command: str, expected: float) -> None:
        assert RunConfigBuilder().command(command).build().resolved_alpha() == pytest.approx(
            expected
        )

    def test_explicit_values_win(self) -> None:
        config = RunConfigBuilder().command("trace-scan").alpha_mult(0.8).domain("disk").build()

        assert config.resolved_alpha() == pytest.approx(0.8 * math.pi)
        assert config.resolved_domain() is Domain.DISK

    def test_echo_is_json_ready(self, tmp_path: Path) -> None:
        config = RunConfigBuilder().command("beurling").output_dir(tmp_path).build()

        echoed = config.echo()

        assert echoed["command"] == "beurling"
        assert echoed["preconditioner"] == "lagged_diffusion"
        assert echoed["output_dir"] == str(tmp_path)
        assert RunConfig(**echoed) == config


class TestLabSettings:
    def test_defaults(self, monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
        monkeypatch.chdir(tmp_path)
        for name in ("TRACELAB_OUTPUT_DIR", "TRACELAB_LOG_LEVEL", "TRACELAB_MAX_WORKERS"):
            monkeypatch.delenv(name, raising=False)

        settings = LabSettings()

        assert settings.output_dir == Path("out")
        assert settings.log_level == "INFO"
        assert settings.max_workers == 4

    def test_environment_overrides(self, monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
        monkeypatch.chdir(tmp_path)
        monkeypatch.setenv("TRACELAB_OUTPUT_DIR", str(tmp_path / "runs"))
        monkeypatch.setenv("TRACELAB_LOG_LEVEL", "debug")

        settings = LabSettings()

        assert settings.output_dir == tmp_path / "runs"
        assert settings.log_level == "DEBUG"

    def test_dotenv_file(self, monkeypatch: pytest.MonkeyPatch, tmp_path: Path) -> None:
        monkeypatch.chdir(tmp_path)
        monkeypatch.delenv("TRACELAB_MAX_WORKERS", raising=False)
        (tmp_path / ".env").write_text("TRACELAB_MAX_WORKERS=2\n", encoding="utf-8")

        assert LabSettings().max_workers == 2

    def test_unknown_log_level(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv("TRACELAB_LOG_LEVEL", "LOUD")

        with pytest.raises(ValidationError, match="log level"):
            LabSettings()
