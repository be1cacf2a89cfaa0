"""
Extremal-sequence layer.

Moser-type concentrating functions u_r at a boundary point, their Dirichlet
norms, and the sharpness scans showing blow-up of the trace integral above
the trace constant β_n:
- planar meshes (n = 2) through moser.py
- the half-space radial model for any n through radial_model.py

Usage:
    from src.extremals import MoserParams, sharpness_experiment
    from src.geometry import build_graded_half_disk_mesh, trace_constant

    radii = [1e-1, 1e-2, 1e-3, 1e-4]
    mesh = build_graded_half_disk_mesh(min(radii), anchor_radii=radii)
    report = sharpness_experiment(1.2 * trace_constant(2), radii, mesh)
"""

from src.extremals.exceptions import ExtremalError, TraceBoundaryError, UnderResolvedMeshError
from src.extremals.moser import (
    MoserParams,
    growth_exponent,
    moser_function,
    moser_norm_measured,
    moser_norm_predicted,
    moser_profile,
    normalized_test_sequence,
    predicted_growth_exponent,
    sharpness_experiment,
)
from src.extremals.radial_model import (
    radial_moser_norm,
    radial_moser_profile,
    radial_sharpness_experiment,
)

__all__ = [
    "ExtremalError",
    "TraceBoundaryError",
    "UnderResolvedMeshError",
    "MoserParams",
    "growth_exponent",
    "moser_function",
    "moser_norm_measured",
    "moser_norm_predicted",
    "moser_profile",
    "normalized_test_sequence",
    "predicted_growth_exponent",
    "sharpness_experiment",
    "radial_moser_norm",
    "radial_moser_profile",
    "radial_sharpness_experiment",
]
