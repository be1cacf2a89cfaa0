"""
Trace functional layer.

Boundary Moser integrals ∫_∂Ω exp(α|u|^{n/(n-1)}), the boundary-to-interior
conversion check, and boundedness scans with their verdicts.
"""

from src.trace.functional import (
    TraceEvalResult,
    boundary_exponent_max,
    conversion_identity_check,
    exp_or_inf,
    exponent_values,
    holder_admissible,
    holder_term,
    interior_moser_integral,
    log_trace_integral,
    trace_integral,
)
from src.trace.scan import (
    ScanReport,
    Verdict,
    boundedness_scan,
    dominance_verdict,
    evaluate_member,
    growth_verdict,
    normalize_member,
)

__all__ = [
    "TraceEvalResult",
    "boundary_exponent_max",
    "conversion_identity_check",
    "exp_or_inf",
    "exponent_values",
    "holder_admissible",
    "holder_term",
    "interior_moser_integral",
    "log_trace_integral",
    "trace_integral",
    "ScanReport",
    "Verdict",
    "boundedness_scan",
    "dominance_verdict",
    "evaluate_member",
    "growth_verdict",
    "normalize_member",
]
