"""
Scan reports and verdicts.

A ScanReport is a pandas table with one row per family member or parameter
value (columns param, trace_integral, grad_norm, mean, exponent_max plus
scan-specific extras) and a verdict from the closed vocabulary below.

Verdict rules (all comparisons on log values, so overflowed rows count):
    growth      blow-up   strictly increasing and max >= 10³ × baseline
                bounded   last-quarter max <= 1.05 × first-half max
                otherwise inconclusive
    dominance   blow-up   strictly increasing and every value >= fraction ×
                          a lower bound that itself diverges
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

import numpy as np
import pandas as pd

from src.energy.p_energy import MeshFunction, dirichlet_norm, mean_value, mean_zero_project
from src.geometry.mesh import boundary_measure
from src.trace.functional import (
    boundary_exponent_max,
    holder_term,
    log_trace_integral,
    trace_integral,
)

logger = logging.getLogger(__name__)

BLOW_UP_FACTOR = 1e3
STABLE_FACTOR = 1.05
DOMINANCE_FRACTION = 0.25
SCAN_COLUMNS = ["param", "trace_integral", "grad_norm", "mean", "exponent_max"]
CSV_FLOAT_FORMAT = "%.17g"


class Verdict(str, Enum):
    """Outcome vocabulary shared by every report."""

    BOUNDED = "bounded"
    BLOW_UP = "blow-up"
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True, eq=False)
class ScanReport:
    """
    Table of scan rows with its verdict.

    Attributes:
        name: Table name (also the CSV stem)
        table: Rows in emission order
        verdict: Classification of the value column
        baseline: Reference value (u ≡ 0 integral) used by the verdict
        details: Extra scalars for the envelope (fitted exponents, caps, ...)
    """

    name: str
    table: pd.DataFrame
    verdict: Verdict
    baseline: float = 0.0
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def empty(self) -> bool:
        return self.table.empty

    def column(self, name: str) -> np.ndarray:
        return self.table[name].to_numpy(dtype=float)

    def to_csv(self, path: Union[str, Path]) -> Path:
        """Write the table with round-trip float precision and '\\n' line endings."""
        path = Path(path)
        self.table.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
        return path

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "verdict": self.verdict.value,
            "baseline": self.baseline,
            "details": dict(self.details),
            "rows": self.table.to_dict(orient="records"),
        }


# =============================================================================
# VERDICTS
# =============================================================================


def _strictly_increasing(log_values: np.ndarray) -> bool:
    return log_values.size >= 2 and bool(np.all(np.diff(log_values) > 0.0))


def growth_verdict(
    log_values: Sequence[float],
    log_baseline: float,
    blow_up_factor: float = BLOW_UP_FACTOR,
    stable_factor: float = STABLE_FACTOR,
) -> Verdict:
    """Classify a scan from the logarithms of its values."""
    values = np.asarray(log_values, dtype=float)
    if values.size == 0:
        return Verdict.INCONCLUSIVE
    if _strictly_increasing(values) and values.max() >= log_baseline + math.log(blow_up_factor):
        return Verdict.BLOW_UP
    first_half = values[: max(1, math.ceil(values.size / 2))]
    last_quarter = values[-max(1, math.ceil(values.size / 4)) :]
    if last_quarter.max() <= first_half.max() + math.log(stable_factor):
        return Verdict.BOUNDED
    return Verdict.INCONCLUSIVE


def dominance_verdict(
    log_values: Sequence[float],
    log_lower_bound: Sequence[float],
    lower_bound_exponent: float,
    fraction: float = DOMINANCE_FRACTION,
) -> Verdict:
    """
    Blow-up when the values rise strictly and dominate a diverging lower bound.

    ``lower_bound_exponent`` is the power of 1/r in the lower bound; only a
    positive exponent makes the bound diverge. Otherwise the growth rule
    (with the first value as baseline) decides.
    """
    values = np.asarray(log_values, dtype=float)
    lower = np.asarray(log_lower_bound, dtype=float)
    if lower_bound_exponent > 0.0:
        dominated = bool(np.all(values >= lower + math.log(fraction)))
        if _strictly_increasing(values) and dominated:
            return Verdict.BLOW_UP
        return Verdict.INCONCLUSIVE
    if values.size == 0:
        return Verdict.INCONCLUSIVE
    verdict = growth_verdict(values, float(values[0]))
    return Verdict.BOUNDED if verdict is Verdict.BOUNDED else Verdict.INCONCLUSIVE


# =============================================================================
# BOUNDEDNESS SCAN
# =============================================================================


def normalize_member(u: MeshFunction, n: int) -> MeshFunction:
    """Project to mean zero and scale down so that ‖∇u‖_{L^n} <= 1."""
    centred = mean_zero_project(u)
    norm = dirichlet_norm(centred, n)
    return centred * (1.0 / norm) if norm > 1.0 else centred


def evaluate_member(
    u: MeshFunction,
    alpha: float,
    n: int,
    tags: Optional[Iterable[str]] = None,
    holder_p: Optional[float] = None,
) -> dict[str, float]:
    """Normalize ``u`` and evaluate the scan columns (without ``param``)."""
    tag_list = None if tags is None else list(tags)
    member = normalize_member(u, n)
    row = {
        "trace_integral": trace_integral(member, alpha, n, tag_list),
        "grad_norm": dirichlet_norm(member, n),
        "mean": mean_value(member),
        "exponent_max": boundary_exponent_max(member, alpha, n, tag_list),
        "log_trace_integral": log_trace_integral(member, alpha, n, tag_list),
    }
    if holder_p is not None:
        row["holder_term"] = holder_term(member, alpha, n, holder_p)
    return row


def boundedness_scan(
    family: Sequence[MeshFunction],
    alpha: float,
    n: int,
    params: Optional[Sequence[float]] = None,
    tags: Optional[Iterable[str]] = None,
    holder_p: Optional[float] = None,
    max_workers: int = 1,
    name: str = "trace_scan",
) -> ScanReport:
    """
    Trace integrals of a normalized family and the growth verdict.

    Args:
        family: Functions on a common mesh, normalized before evaluation
        alpha: α >= 0
        n: Dimension of the exponent n/(n-1)
        params: Value for the ``param`` column (member index by default)
        tags: Restrict the boundary integral to these edge tags
        holder_p: Add the Hölder diagnostic column for this p (1 < p < n)
        max_workers: Threads evaluating members; row order is input order
        name: Table name

    Returns:
        ScanReport whose baseline is the u ≡ 0 value |∂Ω|_h (tagged part)
    """
    if params is not None and len(params) != len(family):
        raise ValueError(f"{len(params)} params for {len(family)} family members")
    tag_list = None if tags is None else list(tags)
    labels = list(range(len(family))) if params is None else list(params)

    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as pool:
        rows = list(pool.map(lambda u: evaluate_member(u, alpha, n, tag_list, holder_p), family))

    if not rows:
        empty = pd.DataFrame(columns=SCAN_COLUMNS + ["log_trace_integral"])
        logger.warning("Scan %s has no members", name)
        return ScanReport(name=name, table=empty, verdict=Verdict.INCONCLUSIVE)

    table = pd.DataFrame(rows)
    table.insert(0, "param", labels)
    table = table[SCAN_COLUMNS + [c for c in table.columns if c not in SCAN_COLUMNS]]
    for label, row in zip(labels, rows):
        logger.debug("scan %s: param=%s log T=%.6g", name, label, row["log_trace_integral"])

    baseline = boundary_measure(family[0].mesh, tag_list)
    log_values = table["log_trace_integral"].to_numpy(dtype=float)
    verdict = growth_verdict(log_values, math.log(baseline))
    if verdict is Verdict.INCONCLUSIVE:
        logger.warning("Scan %s (alpha=%g) is inconclusive", name, alpha)
    else:
        logger.info("Scan %s (alpha=%g): %s", name, alpha, verdict.value)
    return ScanReport(name=name, table=table, verdict=verdict, baseline=baseline)
