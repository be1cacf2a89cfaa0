"""
Environment settings for lab runs.

Values come from TRACELAB_* environment variables or a local .env file;
command-line flags take precedence over both.
"""

from __future__ import annotations

from pathlib import Path

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class LabSettings(BaseSettings):
    """Process-wide defaults loaded from the environment."""

    output_dir: Path = Field(default=Path("out"))
    log_level: str = Field(default="INFO")
    max_workers: int = Field(default=4, ge=1)

    model_config = SettingsConfigDict(
        env_prefix="TRACELAB_",
        env_file=".env",
        extra="ignore",
    )

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in LOG_LEVELS:
            raise ValueError(f"log level must be one of {LOG_LEVELS}, got {value!r}")
        return level
