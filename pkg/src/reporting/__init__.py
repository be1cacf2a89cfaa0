"""
Reporting layer.

Runs subcommands (runner), collects their results in a ReportEnvelope and
writes report.json, CSV tables and a gnuplot script (envelope, plots).
"""

from src.reporting.envelope import (
    EXIT_NUMERIC_FAILURE,
    EXIT_OK,
    EXIT_USAGE,
    ReportEnvelope,
    TableArtifact,
    validate_envelope,
    write_envelope,
)
from src.reporting.exceptions import ReportingError, UsageError
from src.reporting.plots import emit_plot_script
from src.reporting.runner import run

__all__ = [
    "EXIT_NUMERIC_FAILURE",
    "EXIT_OK",
    "EXIT_USAGE",
    "ReportEnvelope",
    "TableArtifact",
    "emit_plot_script",
    "run",
    "validate_envelope",
    "write_envelope",
    "ReportingError",
    "UsageError",
]
