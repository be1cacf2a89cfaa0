"""
Geometry layer.

Provides the dimensional constants of the trace inequality and the discrete
domains every computation runs on:
- DimensionConstants (n, ω_{n-1}, α_n, β_n, p, p*)
- TriMesh triangulations of the unit disk and half-disk, uniform or graded
- RadialGrid / RadialProfile for arbitrary-dimension radial checks

Usage:
    from src.geometry import build_disk_mesh, boundary_quadrature, trace_constant

    mesh = build_disk_mesh(refinement=4)
    perimeter = boundary_quadrature(mesh, lambda xy: np.ones(len(xy)))
    beta_2 = trace_constant(2)  # π
"""

from src.geometry.constants import (
    DimensionConstants,
    interior_trace_gap_constant,
    lanczos_gamma,
    moser_constant,
    sobolev_conjugate,
    sphere_measure,
    trace_constant,
    unit_ball_volume,
)
from src.geometry.exceptions import DimensionError, GeometryError, MeshError, NonFiniteValueError
from src.geometry.mesh import (
    ARC_TAG,
    TRACE_TAG,
    TriMesh,
    boundary_measure,
    boundary_quadrature,
    build_disk_mesh,
    build_graded_disk_mesh,
    build_graded_half_disk_mesh,
    build_half_disk_mesh,
    read_mesh_text,
    refine,
    write_mesh_text,
)
from src.geometry.radial import RadialGrid, RadialProfile

__all__ = [
    # Constants
    "DimensionConstants",
    "interior_trace_gap_constant",
    "lanczos_gamma",
    "moser_constant",
    "sobolev_conjugate",
    "sphere_measure",
    "trace_constant",
    "unit_ball_volume",
    # Exceptions
    "DimensionError",
    "GeometryError",
    "MeshError",
    "NonFiniteValueError",
    # Meshes
    "ARC_TAG",
    "TRACE_TAG",
    "TriMesh",
    "boundary_measure",
    "boundary_quadrature",
    "build_disk_mesh",
    "build_graded_disk_mesh",
    "build_graded_half_disk_mesh",
    "build_half_disk_mesh",
    "read_mesh_text",
    "refine",
    "write_mesh_text",
    # Radial
    "RadialGrid",
    "RadialProfile",
]
