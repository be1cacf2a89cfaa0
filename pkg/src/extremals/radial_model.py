"""
Half-space radial model of the concentrating sequence in any dimension n.

The member u_r centred at a point of a flat boundary depends on ρ = |x − y|
only, so on the half-ball B_1(y) ∩ {x_n > 0}

    ‖∇u_r‖_n^n       = ½ ω_{n-1} ∫ |u'|^n ρ^{n-1} dρ
    ∫_{flat disk} e^G = ω_{n-2} ∫_0^1 e^{G(ρ)} ρ^{n-2} dρ,   ω_{n-2} = (n−1)|B^{n-1}|

and the sharpness scan of the planar mesh carries over to n ≥ 3 as 1-D sums
on a RadialGrid graded toward ρ = 0 with r as a node.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Optional, Sequence

import numpy as np
import pandas as pd
from scipy.special import logsumexp

from src.extremals.moser import (
    SHARPNESS_COLUMNS,
    fit_growth_slope,
    log_lower_bound,
    moser_profile,
    predicted_growth_exponent,
    sorted_radii,
)
from src.geometry.constants import trace_constant, unit_ball_volume
from src.geometry.radial import RadialGrid, RadialProfile
from src.trace.functional import exp_or_inf, exponent_values
from src.trace.scan import (
    DOMINANCE_FRACTION,
    ScanReport,
    Verdict,
    dominance_verdict,
    growth_verdict,
)
from src.utils.validation import require_open_interval, require_positive

logger = logging.getLogger(__name__)

DEFAULT_RATIO = 1.05
HALF_BALL = 0.5


def radial_moser_profile(r: float, n: int, grid: Optional[RadialGrid] = None) -> RadialProfile:
    """u_r sampled on ``grid`` (graded toward 0 with r as a node by default)."""
    require_open_interval(r, 0.0, 1.0, "r")
    if grid is None:
        grid = RadialGrid.graded(n, r, anchors=[r], ratio=DEFAULT_RATIO)
    if grid.n != n or grid.R != 1.0:
        raise ValueError(f"grid is for (n={grid.n}, R={grid.R}), need (n={n}, R=1)")
    return RadialProfile(grid=grid, values=moser_profile(grid.nodes, r))


def radial_moser_norm(r: float, n: int, grid: Optional[RadialGrid] = None) -> float:
    """‖∇u_r‖_n^n on the half-ball, exact for the piecewise-linear profile."""
    return radial_moser_profile(r, n, grid).dirichlet_energy(n, HALF_BALL)


def _log_flat_trace_integral(grid: RadialGrid, exponents: np.ndarray) -> float:
    """log ω_{n-2} ∫_0^1 e^{G} ρ^{n-2} dρ by the trapezoid rule in log space."""
    n = grid.n
    nodes = grid.nodes
    steps = np.diff(nodes)
    weights = np.zeros_like(nodes)
    weights[:-1] += 0.5 * steps
    weights[1:] += 0.5 * steps
    log_terms = exponents + np.log(weights)
    if n > 2:
        with np.errstate(divide="ignore"):
            log_terms = log_terms + (n - 2) * np.log(nodes)
    return math.log((n - 1) * unit_ball_volume(n - 1)) + float(logsumexp(log_terms))


def _radial_row(alpha: float, r: float, n: int, ratio: float) -> dict[str, float]:
    grid = RadialGrid.graded(n, r, anchors=[r], ratio=ratio)
    profile = radial_moser_profile(r, n, grid)
    norm = profile.dirichlet_energy(n, HALF_BALL) ** (1.0 / n)
    mean = profile.mean()
    normalized = (profile.values - mean) / norm
    member = RadialProfile(grid=grid, values=normalized)
    exponents = exponent_values(normalized, alpha, n)
    log_value = _log_flat_trace_integral(grid, exponents)
    log_bound = log_lower_bound(alpha, r, n)
    logger.debug("radial n=%d r=%.3e: log T=%.6g log bound=%.6g", n, r, log_value, log_bound)
    return {
        "param": r,
        "trace_integral": exp_or_inf(log_value),
        "grad_norm": member.dirichlet_energy(n, HALF_BALL) ** (1.0 / n),
        "mean": member.mean(),
        "exponent_max": float(np.max(exponents)),
        "log_trace_integral": log_value,
        "lower_bound": exp_or_inf(log_bound),
        "log_lower_bound": log_bound,
        "plateau": float(normalized[0]),
    }


def radial_sharpness_experiment(
    alpha: float,
    r_values: Sequence[float],
    n: int,
    ratio: float = DEFAULT_RATIO,
    max_workers: int = 1,
    fraction: float = DOMINANCE_FRACTION,
) -> ScanReport:
    """
    Sharpness scan of the half-space model for any n >= 2.

    Rows follow r descending. The verdict is the dominance rule against the
    lower bound; ``details["growth_verdict"]`` additionally applies the 10³×
    baseline rule with baseline |B^{n-1}| (the u ≡ 0 value).
    """
    require_positive(alpha, "alpha")
    radii = sorted_radii(r_values)
    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as pool:
        rows = list(pool.map(lambda r: _radial_row(alpha, r, n, ratio), radii))

    table = pd.DataFrame(rows, columns=SHARPNESS_COLUMNS)
    log_values = table["log_trace_integral"].to_numpy(dtype=float)
    baseline = unit_ball_volume(n - 1)
    verdict = dominance_verdict(
        log_values,
        table["log_lower_bound"].to_numpy(dtype=float),
        predicted_growth_exponent(alpha, n),
        fraction,
    )
    details: dict[str, Any] = {
        "alpha": alpha,
        "alpha_over_beta": alpha / trace_constant(n),
        "n": n,
        "predicted_exponent": predicted_growth_exponent(alpha, n),
        "baseline": baseline,
        "growth_verdict": growth_verdict(log_values, math.log(baseline)).value,
    }
    if len(table) >= 2:
        radii_column = table["param"].to_numpy(dtype=float)
        details["fitted_exponent"] = fit_growth_slope(radii_column, log_values)
    if verdict is Verdict.INCONCLUSIVE:
        logger.warning("Radial sharpness scan n=%d alpha=%g is inconclusive", n, alpha)
    else:
        logger.info("Radial sharpness n=%d alpha=%g: %s", n, alpha, verdict.value)
    return ScanReport(
        name=f"radial_sharpness_n{n}",
        table=table,
        verdict=verdict,
        baseline=baseline,
        details=details,
    )
