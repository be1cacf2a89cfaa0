"""
Conforming triangulations of planar domains.

TriMesh carries vertices, positively oriented cells and tagged boundary
edges. All derived quantities (areas, P1 gradient operators, lumped masses,
boundary masses, outward normals) are computed once and cached; meshes are
immutable after construction and safe to share between threads.

Boundary tags used by the builders:
    "arc"   — edges on the unit circle; refinement projects new midpoints
              back onto the circle
    "trace" — the flat segment of the half-disk

Functions:
    build_disk_mesh — 12-gon fan of the unit disk, red-refined
    build_half_disk_mesh — fan of the upper half-disk, red-refined
    build_graded_half_disk_mesh — polar mesh graded toward the origin
    build_graded_disk_mesh — full-disk variant of the graded mesh
    refine — one level of red (1-to-4) refinement
    boundary_quadrature — edgewise trapezoid rule on (tagged) boundary edges
    boundary_measure — total length of (tagged) boundary edges
    write_mesh_text / read_mesh_text — plain-text mesh exchange
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike
from scipy.sparse import coo_matrix, csr_matrix

from src.geometry.exceptions import MeshError
from src.utils.validation import require_finite, require_min_int, require_open_interval

logger = logging.getLogger(__name__)

ARC_TAG = "arc"
TRACE_TAG = "trace"

Integrand = Union[ArrayLike, Callable[[np.ndarray], np.ndarray]]


# =============================================================================
# MESH TYPE
# =============================================================================


@dataclass(frozen=True, eq=False)
class TriMesh:
    """
    Triangulation of a planar domain.

    Attributes:
        vertices: (N, 2) coordinates
        cells: (M, 3) vertex indices, counter-clockwise
        boundary_edges: (B, 2) vertex indices, oriented as in their cell
        boundary_tags: One tag per boundary edge
        level: Refinement level (0 for a base mesh)
    """

    vertices: np.ndarray
    cells: np.ndarray
    boundary_edges: np.ndarray
    boundary_tags: tuple[str, ...]
    level: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", np.ascontiguousarray(self.vertices, dtype=float))
        object.__setattr__(self, "cells", np.ascontiguousarray(self.cells, dtype=np.int64))
        object.__setattr__(
            self, "boundary_edges", np.ascontiguousarray(self.boundary_edges, dtype=np.int64)
        )
        object.__setattr__(self, "boundary_tags", tuple(self.boundary_tags))
        self._validate()

    def _validate(self) -> None:
        n_vertices = self.vertices.shape[0]
        if self.vertices.ndim != 2 or self.vertices.shape[1] != 2:
            raise MeshError(f"vertices must have shape (N, 2), got {self.vertices.shape}")
        if self.cells.ndim != 2 or self.cells.shape[1] != 3 or self.cells.shape[0] == 0:
            raise MeshError(f"cells must have shape (M, 3), got {self.cells.shape}")
        if self.boundary_edges.ndim != 2 or self.boundary_edges.shape[1] != 2:
            raise MeshError(
                f"boundary_edges must have shape (B, 2), got {self.boundary_edges.shape}"
            )
        if len(self.boundary_tags) != self.boundary_edges.shape[0]:
            raise MeshError("one tag is required per boundary edge")
        if self.cells.min() < 0 or self.cells.max() >= n_vertices:
            raise MeshError("cell references a vertex index out of range")
        if not np.all(np.isfinite(self.vertices)):
            raise MeshError("vertex coordinates must be finite")

        areas = self.cell_areas
        bad = np.flatnonzero(areas <= 0.0)
        if bad.size:
            raise MeshError(
                f"cell {int(bad[0])} has non-positive signed area {areas[bad[0]]:.3e}"
            )

        # Directed edges seen by the cells; a boundary edge is one whose
        # undirected key occurs exactly once.
        directed = self.cells[:, [[0, 1], [1, 2], [2, 0]]].reshape(-1, 2)
        keys = _edge_keys(directed, n_vertices)
        unique_keys, counts = np.unique(keys, return_counts=True)
        if np.any(counts > 2):
            raise MeshError("an edge is shared by more than two cells")
        open_keys = unique_keys[counts == 1]

        boundary_keys = _edge_keys(self.boundary_edges, n_vertices)
        if np.unique(boundary_keys).size != boundary_keys.size:
            raise MeshError("duplicate boundary edge")
        if not np.array_equal(np.sort(boundary_keys), open_keys):
            raise MeshError("boundary edges do not match the edges owned by exactly one cell")

        directed_keys = self.boundary_edges[:, 0] * n_vertices + self.boundary_edges[:, 1]
        cell_directed = directed[:, 0] * n_vertices + directed[:, 1]
        if not np.all(np.isin(directed_keys, cell_directed)):
            raise MeshError("boundary edge orientation disagrees with its cell")

        starts = np.bincount(self.boundary_edges[:, 0], minlength=n_vertices)
        ends = np.bincount(self.boundary_edges[:, 1], minlength=n_vertices)
        if not np.array_equal(starts, ends) or np.any(starts > 1):
            raise MeshError("boundary edges do not form closed loops")

    # -------------------------------------------------------------------------
    # Cell quantities
    # -------------------------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def n_cells(self) -> int:
        return int(self.cells.shape[0])

    @cached_property
    def cell_areas(self) -> np.ndarray:
        """Signed cell areas (positive for a valid mesh)."""
        p0, p1, p2 = (self.vertices[self.cells[:, k]] for k in range(3))
        e1 = p1 - p0
        e2 = p2 - p0
        return 0.5 * (e1[:, 0] * e2[:, 1] - e1[:, 1] * e2[:, 0])

    @cached_property
    def area(self) -> float:
        """Discrete area |Ω|_h."""
        return float(np.sum(self.cell_areas))

    @cached_property
    def cell_centroids(self) -> np.ndarray:
        return self.vertices[self.cells].mean(axis=1)

    @cached_property
    def gradient_operators(self) -> tuple[csr_matrix, csr_matrix]:
        """
        Sparse (M, N) operators mapping nodal values to per-cell gradients.

        For a cell (i, j, k) the P1 hat of vertex i has gradient
        (y_j - y_k, x_k - x_j) / (2A), cyclically.
        """
        x = self.vertices[self.cells, 0]
        y = self.vertices[self.cells, 1]
        twice_area = 2.0 * self.cell_areas[:, None]
        roll_next = [1, 2, 0]
        roll_prev = [2, 0, 1]
        gx = (y[:, roll_next] - y[:, roll_prev]) / twice_area
        gy = (x[:, roll_prev] - x[:, roll_next]) / twice_area

        rows = np.repeat(np.arange(self.n_cells), 3)
        cols = self.cells.ravel()
        shape = (self.n_cells, self.n_vertices)
        grad_x = coo_matrix((gx.ravel(), (rows, cols)), shape=shape).tocsr()
        grad_y = coo_matrix((gy.ravel(), (rows, cols)), shape=shape).tocsr()
        return grad_x, grad_y

    @cached_property
    def lumped_mass(self) -> np.ndarray:
        """Row-summed P1 mass: each vertex receives a third of each adjacent cell."""
        weights = np.repeat(self.cell_areas / 3.0, 3)
        return np.bincount(self.cells.ravel(), weights=weights, minlength=self.n_vertices)

    @cached_property
    def edges(self) -> np.ndarray:
        """Unique undirected edges (sorted vertex pairs)."""
        directed = self.cells[:, [[0, 1], [1, 2], [2, 0]]].reshape(-1, 2)
        return np.unique(np.sort(directed, axis=1), axis=0)

    @cached_property
    def max_edge_length(self) -> float:
        """Mesh size h."""
        return float(np.max(self._edge_lengths(self.edges)))

    def distance_to_edges(
        self, point: Sequence[float], pairs: Optional[np.ndarray] = None
    ) -> np.ndarray:
        """Euclidean distance from ``point`` to each edge segment (all edges by default)."""
        pairs = self.edges if pairs is None else pairs
        a = self.vertices[pairs[:, 0]]
        d = self.vertices[pairs[:, 1]] - a
        offset = np.asarray(point, dtype=float) - a
        t = np.clip(np.sum(offset * d, axis=1) / np.sum(d * d, axis=1), 0.0, 1.0)
        return np.linalg.norm(offset - t[:, None] * d, axis=1)

    def max_edge_length_near(self, center: Sequence[float], radius: float) -> float:
        """
        Longest edge meeting the closed ball of ``radius`` around ``center``.

        Falls back to the closest edge when no edge reaches the ball.
        """
        distance = self.distance_to_edges(center)
        near = distance <= max(radius, float(distance.min()))
        return float(np.max(self._edge_lengths(self.edges[near])))

    def _edge_lengths(self, pairs: np.ndarray) -> np.ndarray:
        return np.linalg.norm(self.vertices[pairs[:, 1]] - self.vertices[pairs[:, 0]], axis=1)

    # -------------------------------------------------------------------------
    # Boundary quantities
    # -------------------------------------------------------------------------

    @cached_property
    def boundary_lengths(self) -> np.ndarray:
        return self._edge_lengths(self.boundary_edges)

    @cached_property
    def boundary_normals(self) -> np.ndarray:
        """Outward unit normals (dy, -dx)/L of the counter-clockwise boundary edges."""
        d = self.vertices[self.boundary_edges[:, 1]] - self.vertices[self.boundary_edges[:, 0]]
        return np.column_stack([d[:, 1], -d[:, 0]]) / self.boundary_lengths[:, None]

    @cached_property
    def boundary_nodes(self) -> np.ndarray:
        return np.unique(self.boundary_edges)

    @cached_property
    def boundary_cells(self) -> np.ndarray:
        """Index of the cell owning each boundary edge."""
        n = self.n_vertices
        directed = self.cells[:, [[0, 1], [1, 2], [2, 0]]].reshape(-1, 2)
        cell_keys = directed[:, 0] * n + directed[:, 1]
        order = np.argsort(cell_keys)
        wanted = self.boundary_edges[:, 0] * n + self.boundary_edges[:, 1]
        position = order[np.searchsorted(cell_keys, wanted, sorter=order)]
        return position // 3

    @property
    def tags(self) -> frozenset[str]:
        return frozenset(self.boundary_tags)

    def boundary_edge_mask(self, tags: Optional[Iterable[str]] = None) -> np.ndarray:
        """Select boundary edges by tag (all edges when ``tags`` is None)."""
        if tags is None:
            return np.ones(len(self.boundary_tags), dtype=bool)
        wanted = set(tags)
        unknown = wanted - self.tags
        if unknown:
            raise MeshError(
                f"unknown boundary tag(s) {sorted(unknown)}; mesh has {sorted(self.tags)}"
            )
        return np.array([tag in wanted for tag in self.boundary_tags], dtype=bool)

    def boundary_mass(self, tags: Optional[Iterable[str]] = None) -> np.ndarray:
        """Nodal weights of the boundary trapezoid rule (half of each adjacent edge)."""
        if tags is None:
            return self._full_boundary_mass
        return self._tagged_boundary_mass(self.boundary_edge_mask(tags))

    @cached_property
    def _full_boundary_mass(self) -> np.ndarray:
        return self._tagged_boundary_mass(self.boundary_edge_mask(None))

    def _tagged_boundary_mass(self, mask: np.ndarray) -> np.ndarray:
        half = np.repeat(0.5 * self.boundary_lengths[mask], 2)
        return np.bincount(
            self.boundary_edges[mask].ravel(), weights=half, minlength=self.n_vertices
        )

    @cached_property
    def perimeter(self) -> float:
        """Discrete boundary measure |∂Ω|_h."""
        return float(np.sum(self.boundary_lengths))

    def summary(self) -> dict[str, float]:
        """Serialize the headline quantities for reports."""
        return {
            "level": self.level,
            "n_vertices": self.n_vertices,
            "n_cells": self.n_cells,
            "area": self.area,
            "perimeter": self.perimeter,
            "h": self.max_edge_length,
        }


def _edge_keys(pairs: np.ndarray, n_vertices: int) -> np.ndarray:
    low = np.minimum(pairs[:, 0], pairs[:, 1])
    high = np.maximum(pairs[:, 0], pairs[:, 1])
    return low * n_vertices + high


# =============================================================================
# REFINEMENT
# =============================================================================


def refine(mesh: TriMesh) -> TriMesh:
    """
    Split every cell into four by joining edge midpoints.

    Midpoints of "arc" boundary edges are projected onto the unit circle.

    Args:
        mesh: Mesh to refine

    Returns:
        New mesh with level + 1 and h halved
    """
    n = mesh.n_vertices
    opposite = mesh.cells[:, [[1, 2], [2, 0], [0, 1]]].reshape(-1, 2)
    unique_edges, inverse = np.unique(np.sort(opposite, axis=1), axis=0, return_inverse=True)
    mid = n + inverse.ravel().reshape(-1, 3)

    midpoints = 0.5 * (mesh.vertices[unique_edges[:, 0]] + mesh.vertices[unique_edges[:, 1]])

    # Boundary edges map onto unique edges through their sorted keys.
    unique_keys = unique_edges[:, 0] * n + unique_edges[:, 1]
    boundary_keys = _edge_keys(mesh.boundary_edges, n)
    boundary_unique = np.searchsorted(unique_keys, boundary_keys)

    arc = np.array([tag == ARC_TAG for tag in mesh.boundary_tags], dtype=bool)
    arc_mid = boundary_unique[arc]
    if arc_mid.size:
        radii = np.linalg.norm(midpoints[arc_mid], axis=1)
        midpoints[arc_mid] /= radii[:, None]

    v0, v1, v2 = mesh.cells[:, 0], mesh.cells[:, 1], mesh.cells[:, 2]
    m0, m1, m2 = mid[:, 0], mid[:, 1], mid[:, 2]
    cells = np.concatenate(
        [
            np.column_stack([v0, m2, m1]),
            np.column_stack([v1, m0, m2]),
            np.column_stack([v2, m1, m0]),
            np.column_stack([m0, m1, m2]),
        ]
    )

    bmid = n + boundary_unique
    a, b = mesh.boundary_edges[:, 0], mesh.boundary_edges[:, 1]
    boundary_edges = np.column_stack([a, bmid, bmid, b]).reshape(-1, 2)
    boundary_tags = tuple(tag for tag in mesh.boundary_tags for _ in range(2))

    return TriMesh(
        vertices=np.vstack([mesh.vertices, midpoints]),
        cells=cells,
        boundary_edges=boundary_edges,
        boundary_tags=boundary_tags,
        level=mesh.level + 1,
    )


def _refined(base: TriMesh, refinement: int) -> TriMesh:
    refinement = require_min_int(refinement, 0, "refinement")
    mesh = base
    for _ in range(refinement):
        mesh = refine(mesh)
    logger.debug(
        "Built mesh level %d: %d vertices, %d cells, h=%.3e",
        mesh.level,
        mesh.n_vertices,
        mesh.n_cells,
        mesh.max_edge_length,
    )
    return mesh


# =============================================================================
# BUILDERS
# =============================================================================

_DISK_SECTORS = 12
_HALF_DISK_SECTORS = 6


def build_disk_mesh(refinement: int) -> TriMesh:
    """
    Unit disk: a 12-gon fan around the origin refined ``refinement`` times.

    The level-0 area is 3 (inscribed dodecagon); boundary vertices stay on
    the unit circle at every level.
    """
    angles = 2.0 * np.pi * np.arange(_DISK_SECTORS) / _DISK_SECTORS
    vertices = np.vstack([[0.0, 0.0], np.column_stack([np.cos(angles), np.sin(angles)])])
    ring = np.arange(1, _DISK_SECTORS + 1)
    following = np.roll(ring, -1)
    cells = np.column_stack([np.zeros(_DISK_SECTORS, dtype=np.int64), ring, following])
    base = TriMesh(
        vertices=vertices,
        cells=cells,
        boundary_edges=np.column_stack([ring, following]),
        boundary_tags=(ARC_TAG,) * _DISK_SECTORS,
    )
    return _refined(base, refinement)


def build_half_disk_mesh(refinement: int) -> TriMesh:
    """
    Upper half-disk {|x| < 1, x₂ > 0} with the flat segment tagged "trace".

    The origin (midpoint of the flat segment) is a vertex at every level.
    """
    angles = np.pi * np.arange(_HALF_DISK_SECTORS + 1) / _HALF_DISK_SECTORS
    vertices = np.vstack([[0.0, 0.0], np.column_stack([np.cos(angles), np.sin(angles)])])
    arc_nodes = np.arange(1, _HALF_DISK_SECTORS + 2)
    cells = np.column_stack(
        [np.zeros(_HALF_DISK_SECTORS, dtype=np.int64), arc_nodes[:-1], arc_nodes[1:]]
    )
    last = _HALF_DISK_SECTORS + 1
    boundary_edges = np.vstack(
        [np.column_stack([arc_nodes[:-1], arc_nodes[1:]]), [[last, 0], [0, 1]]]
    )
    tags = (ARC_TAG,) * _HALF_DISK_SECTORS + (TRACE_TAG, TRACE_TAG)
    base = TriMesh(
        vertices=vertices, cells=cells, boundary_edges=boundary_edges, boundary_tags=tags
    )
    return _refined(base, refinement)


def graded_radii(
    r_min: float, ratio: float, anchor_radii: Sequence[float] = (), outer: float = 1.0
) -> np.ndarray:
    """
    Geometric radii from r_min/8 to ``outer`` with anchors inserted exactly.

    Geometric radii closer than half a grading step to an anchor are dropped
    so no ring is squeezed against an anchor ring.
    """
    require_open_interval(r_min, 0.0, outer, "r_min")
    if ratio <= 1.0:
        raise ValueError(f"ratio must be > 1, got {ratio}")
    start = r_min / 8.0
    count = int(math.ceil(math.log(outer / start) / math.log(ratio)))
    geometric = start * ratio ** np.arange(count)
    anchors = np.array(sorted({float(a) for a in anchor_radii if start < a < outer} | {outer}))
    log_gap = np.abs(np.log(geometric[:, None]) - np.log(anchors[None, :]))
    geometric = geometric[np.all(log_gap >= 0.5 * math.log(ratio), axis=1)]
    return np.unique(np.concatenate([geometric, anchors]))


def _polar_mesh(radii: np.ndarray, angular_cells: int, full: bool) -> TriMesh:
    span = 2.0 * np.pi if full else np.pi
    per_ring = angular_cells if full else angular_cells + 1
    theta = span * np.arange(per_ring) / angular_cells
    n_rings = radii.size

    ring_x = radii[:, None] * np.cos(theta)[None, :]
    ring_y = radii[:, None] * np.sin(theta)[None, :]
    vertices = np.vstack([[0.0, 0.0], np.column_stack([ring_x.ravel(), ring_y.ravel()])])

    def node(i: Union[int, np.ndarray], j: Union[int, np.ndarray]) -> np.ndarray:
        return 1 + i * per_ring + (j % per_ring)

    j = np.arange(angular_cells)
    fan = np.column_stack([np.zeros(angular_cells, dtype=np.int64), node(0, j), node(0, j + 1)])

    ii, jj = np.meshgrid(np.arange(n_rings - 1), j, indexing="ij")
    ii, jj = ii.ravel(), jj.ravel()
    a, b = node(ii, jj), node(ii + 1, jj)
    c, d = node(ii + 1, jj + 1), node(ii, jj + 1)
    cells = np.vstack([fan, np.column_stack([a, b, c]), np.column_stack([a, c, d])])

    outer = n_rings - 1
    arc = np.column_stack([node(outer, j), node(outer, j + 1)])
    if full:
        return TriMesh(vertices, cells, arc, (ARC_TAG,) * angular_cells)

    # Flat segment: outward along θ = 0, back along θ = π.
    rings = np.arange(n_rings)
    right = np.column_stack(
        [np.concatenate([[0], node(rings[:-1], 0)]), node(rings, 0)]
    )
    left = np.column_stack(
        [node(rings, angular_cells), np.concatenate([[0], node(rings[:-1], angular_cells)])]
    )
    boundary_edges = np.vstack([arc, right, left])
    tags = (ARC_TAG,) * angular_cells + (TRACE_TAG,) * (2 * n_rings)
    return TriMesh(vertices, cells, boundary_edges, tags)


def build_graded_half_disk_mesh(
    r_min: float, angular_cells: int = 48, anchor_radii: Sequence[float] = ()
) -> TriMesh:
    """
    Polar mesh of the upper half-disk graded toward the origin.

    Rings grow geometrically with ratio 1 + π/angular_cells, so cells stay
    close to square; near radius ρ the mesh size is about ρπ√2/angular_cells.
    Every anchor radius is a ring. The flat segment is tagged "trace".
    """
    angular_cells = require_min_int(angular_cells, 4, "angular_cells")
    ratio = 1.0 + math.pi / angular_cells
    radii = graded_radii(r_min, ratio, anchor_radii)
    mesh = _polar_mesh(radii, angular_cells, full=False)
    logger.debug(
        "Graded half-disk: %d rings, %d vertices, innermost radius %.3e",
        radii.size,
        mesh.n_vertices,
        radii[0],
    )
    return mesh


def build_graded_disk_mesh(
    r_min: float, angular_cells: int = 96, anchor_radii: Sequence[float] = ()
) -> TriMesh:
    """Full-disk counterpart of build_graded_half_disk_mesh (centre is interior)."""
    angular_cells = require_min_int(angular_cells, 8, "angular_cells")
    ratio = 1.0 + 2.0 * math.pi / angular_cells
    radii = graded_radii(r_min, ratio, anchor_radii)
    return _polar_mesh(radii, angular_cells, full=True)


# =============================================================================
# BOUNDARY QUADRATURE
# =============================================================================


def _nodal(mesh: TriMesh, f: Integrand) -> np.ndarray:
    if callable(f):
        values = np.asarray(f(mesh.vertices), dtype=float)
    else:
        values = np.asarray(f, dtype=float)
    if values.shape != (mesh.n_vertices,):
        raise MeshError(f"expected {mesh.n_vertices} nodal values, got shape {values.shape}")
    return values


def boundary_quadrature(
    mesh: TriMesh, f: Integrand, tags: Optional[Iterable[str]] = None
) -> float:
    """
    Edgewise trapezoid rule Σ_e |e| (f_a + f_b)/2 over the boundary.

    Exact for integrands linear along each edge.

    Args:
        mesh: Mesh
        f: Nodal values, or a callable evaluated at the vertices
        tags: Restrict to edges with these tags (all edges if None)

    Raises:
        NonFiniteValueError: If the integrand is not finite at a boundary node
    """
    values = _nodal(mesh, f)
    mask = mesh.boundary_edge_mask(tags)
    edges = mesh.boundary_edges[mask]
    require_finite(values, "boundary integrand", nodes=np.unique(edges))
    lengths = mesh.boundary_lengths[mask]
    return float(np.sum(lengths * 0.5 * (values[edges[:, 0]] + values[edges[:, 1]])))


def boundary_measure(mesh: TriMesh, tags: Optional[Iterable[str]] = None) -> float:
    """Length of the (tagged) discrete boundary."""
    return float(np.sum(mesh.boundary_lengths[mesh.boundary_edge_mask(tags)]))


# =============================================================================
# TEXT EXCHANGE FORMAT
# =============================================================================


def write_mesh_text(mesh: TriMesh, path: Union[str, Path]) -> Path:
    """
    Write ``n_vertices n_cells n_boundary_edges``, then vertices, cells and
    tagged boundary edges, one per line.
    """
    path = Path(path)
    lines = [f"{mesh.n_vertices} {mesh.n_cells} {mesh.boundary_edges.shape[0]}"]
    lines.extend(f"{x:.17g} {y:.17g}" for x, y in mesh.vertices)
    lines.extend(f"{a} {b} {c}" for a, b, c in mesh.cells)
    lines.extend(
        f"{a} {b} {tag}" for (a, b), tag in zip(mesh.boundary_edges, mesh.boundary_tags)
    )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    logger.info("Wrote mesh (%d vertices) to %s", mesh.n_vertices, path)
    return path


def read_mesh_text(path: Union[str, Path]) -> TriMesh:
    """
    Parse the plain-text mesh format written by write_mesh_text.

    Raises:
        MeshError: On a malformed header, short file or invalid mesh
    """
    path = Path(path)
    rows = [line.split() for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]
    if not rows:
        raise MeshError(f"{path}: empty mesh file")
    try:
        n_vertices, n_cells, n_edges = (int(token) for token in rows[0])
    except ValueError as e:
        raise MeshError(f"{path}: malformed header {rows[0]!r}") from e

    expected = 1 + n_vertices + n_cells + n_edges
    if len(rows) != expected:
        raise MeshError(f"{path}: expected {expected} non-empty lines, found {len(rows)}")

    body = rows[1:]
    try:
        vertices = np.array([[float(t) for t in row] for row in body[:n_vertices]])
        cells = np.array(
            [[int(t) for t in row] for row in body[n_vertices : n_vertices + n_cells]]
        )
        edge_rows = body[n_vertices + n_cells :]
        edges = np.array([[int(row[0]), int(row[1])] for row in edge_rows]).reshape(-1, 2)
        tags = tuple(row[2] if len(row) > 2 else ARC_TAG for row in edge_rows)
    except (ValueError, IndexError) as e:
        raise MeshError(f"{path}: malformed mesh body: {e}") from e

    return TriMesh(vertices=vertices, cells=cells, boundary_edges=edges, boundary_tags=tags)
