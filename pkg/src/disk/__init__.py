"""
Unit-disk layer.

Beurling's extremal function, its Dirichlet integral and level-set estimate,
the Poisson kernel, and the Chang–Marshall integral with its a → 1 scans.
"""

from src.disk.chang_marshall import (
    BoundaryFunction1D,
    DiskPoint,
    beurling_boundary,
    beurling_cm_integral,
    beurling_dirichlet_norm_sq,
    beurling_dirichlet_norm_sq_quadrature,
    beurling_values,
    boundary_frame,
    cm_integral,
    cm_scan,
    cm_verdict,
    default_z_grid,
    distribution_bound,
    export_boundary_csv,
    harmonic_dirichlet_norm_sq,
    level_set_bound,
    level_set_measure,
    log_cm_integral,
    poisson_extension,
    poisson_kernel,
    required_terms,
    rescale_to_dirichlet,
)
from src.disk.exceptions import (
    BeurlingParameterError,
    DiskError,
    InsufficientTermsError,
    SampleCountError,
)

__all__ = [
    "BoundaryFunction1D",
    "DiskPoint",
    "beurling_boundary",
    "beurling_cm_integral",
    "beurling_dirichlet_norm_sq",
    "beurling_dirichlet_norm_sq_quadrature",
    "beurling_values",
    "boundary_frame",
    "cm_integral",
    "cm_scan",
    "cm_verdict",
    "default_z_grid",
    "distribution_bound",
    "export_boundary_csv",
    "harmonic_dirichlet_norm_sq",
    "level_set_bound",
    "level_set_measure",
    "log_cm_integral",
    "poisson_extension",
    "poisson_kernel",
    "required_terms",
    "rescale_to_dirichlet",
    "BeurlingParameterError",
    "DiskError",
    "InsufficientTermsError",
    "SampleCountError",
]
