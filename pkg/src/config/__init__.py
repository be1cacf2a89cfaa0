"""
Configuration module.

Provides environment settings (LabSettings) and the validated per-run
configuration (RunConfig).
"""

from src.config.run_config import Command, Domain, RunConfig
from src.config.settings import LabSettings

__all__ = [
    "Command",
    "Domain",
    "LabSettings",
    "RunConfig",
]
