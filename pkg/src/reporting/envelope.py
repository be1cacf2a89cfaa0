"""
Report envelope: the JSON document every run writes, plus its CSV tables.

Layout of an output directory:
    report.json   {version, config, results[], verdicts{}, timings{}, diagnostics[]}
    <table>.csv   one file per TableArtifact
    plot.gp       gnuplot script drawing the tables

The envelope is validated against schemas/report_envelope_schema.json before
it is written. Non-finite floats (overflowed integrals) are written as the
strings "inf", "-inf" and "nan".
"""

import json
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Optional, Union

import jsonschema
import numpy as np
import pandas as pd
from jsonschema import ValidationError

from src.reporting.exceptions import ReportingError
from src.reporting.plots import PLOT_FILE, emit_plot_script
from src.trace.scan import CSV_FLOAT_FORMAT, Verdict

logger = logging.getLogger(__name__)

TOOL_VERSION = "0.1.0"
REPORT_FILE = "report.json"
SCHEMA_DIR = Path(__file__).resolve().parents[2] / "schemas"
DEFAULT_SCHEMA_PATH = SCHEMA_DIR / "report_envelope_schema.json"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC_FAILURE = 2


@dataclass(frozen=True, eq=False)
class TableArtifact:
    """
    A table written as CSV and drawn by the plot script.

    Attributes:
        name: CSV stem
        table: Rows
        x: Column on the horizontal axis
        y: Columns drawn against x
        log_x: Logarithmic x axis
        log_y: Logarithmic y axis
    """

    name: str
    table: pd.DataFrame
    x: str
    y: tuple[str, ...]
    log_x: bool = False
    log_y: bool = False

    @property
    def file_name(self) -> str:
        return f"{self.name}.csv"

    def write(self, directory: Path) -> Path:
        path = directory / self.file_name
        self.table.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
        return path


@dataclass
class ReportEnvelope:
    """Everything one run reports."""

    config: dict[str, Any]
    version: str = TOOL_VERSION
    results: list[dict[str, Any]] = field(default_factory=list)
    verdicts: dict[str, Verdict] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)
    tables: list[TableArtifact] = field(default_factory=list)

    def add_result(
        self,
        name: str,
        kind: str,
        payload: dict[str, Any],
        table: Optional[TableArtifact] = None,
        verdict: Optional[Verdict] = None,
    ) -> None:
        entry = {"name": name, "kind": kind, "table": None, **payload}
        if table is not None:
            self.tables.append(table)
            entry["table"] = table.file_name
        self.results.append(entry)
        if verdict is not None:
            self.verdicts[name] = verdict

    def add_table(self, table: TableArtifact) -> None:
        self.tables.append(table)

    @property
    def failed(self) -> bool:
        return any(verdict is Verdict.FAIL for verdict in self.verdicts.values())

    @property
    def exit_code(self) -> int:
        return EXIT_NUMERIC_FAILURE if self.failed else EXIT_OK

    def to_dict(self) -> dict[str, Any]:
        document = {
            "version": self.version,
            "config": self.config,
            "results": self.results,
            "verdicts": {name: verdict.value for name, verdict in self.verdicts.items()},
            "timings": self.timings,
            "diagnostics": self.diagnostics,
        }
        return dict(sanitize(document))


def sanitize(value: Any) -> Any:
    """Convert to plain JSON types; non-finite floats become strings."""
    if isinstance(value, dict):
        return {str(k): sanitize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [sanitize(v) for v in value]
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        if math.isfinite(number):
            return number
        return "nan" if math.isnan(number) else ("inf" if number > 0 else "-inf")
    if isinstance(value, complex):
        return [sanitize(value.real), sanitize(value.imag)]
    return value


def validate_envelope(
    document: dict[str, Any], schema_path: Union[str, Path] = DEFAULT_SCHEMA_PATH
) -> None:
    """
    Validate a serialized envelope against the JSON schema.

    Raises:
        ReportingError: If the document violates the schema
    """
    with open(schema_path, "r", encoding="utf-8") as f:
        schema = json.load(f)
    try:
        jsonschema.validate(instance=document, schema=schema)
    except ValidationError as e:
        logger.error("Envelope schema validation failed at %s: %s", e.json_path, e.message)
        raise ReportingError(
            f"report envelope violates schema at {e.json_path}: {e.message}"
        ) from e


def write_envelope(envelope: ReportEnvelope, out_dir: Union[str, Path]) -> Path:
    """
    Write CSV tables, plot.gp and report.json into ``out_dir``.

    Returns:
        Path of report.json
    """
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    document = envelope.to_dict()
    validate_envelope(document)

    for artifact in envelope.tables:
        artifact.write(directory)
    (directory / PLOT_FILE).write_text(emit_plot_script(envelope), encoding="utf-8")

    path = directory / REPORT_FILE
    path.write_text(
        json.dumps(document, indent=2, sort_keys=True, allow_nan=False) + "\n", encoding="utf-8"
    )
    logger.info("Wrote %s with %d table(s)", path, len(envelope.tables))
    return path
