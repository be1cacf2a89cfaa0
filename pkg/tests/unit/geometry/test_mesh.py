"""
Unit tests for triangulations and boundary quadrature.

Tests cover:
- Disk and half-disk builders (areas, boundary placement, tags)
- Red refinement (cell counts, mesh size, arc projection, second-order area and perimeter)
- Graded polar meshes (anchor rings, local resolution)
- Validation of malformed meshes
- Boundary quadrature and the plain-text exchange format
"""

import math
from pathlib import Path

import numpy as np
import pytest

from src.geometry.exceptions import MeshError, NonFiniteValueError
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
    graded_radii,
    read_mesh_text,
    refine,
    write_mesh_text,
)


def _single_triangle(clockwise: bool = False) -> TriMesh:
    vertices = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    if clockwise:
        return TriMesh(vertices, [[0, 2, 1]], [[0, 2], [2, 1], [1, 0]], ("arc",) * 3)
    return TriMesh(vertices, [[0, 1, 2]], [[0, 1], [1, 2], [2, 0]], ("arc",) * 3)


class TestDiskMesh:
    """Uniform unit-disk triangulations."""

    def test_base_mesh_is_inscribed_dodecagon(self) -> None:
        mesh = build_disk_mesh(0)

        assert mesh.n_vertices == 13
        assert mesh.n_cells == 12
        assert mesh.area == pytest.approx(3.0, abs=1e-14)
        assert mesh.max_edge_length == pytest.approx(1.0)

    def test_refinement_quadruples_cells(self, disk_mesh: TriMesh) -> None:
        finer = refine(disk_mesh)

        assert finer.n_cells == 4 * disk_mesh.n_cells
        assert finer.level == disk_mesh.level + 1

    def test_mesh_size_roughly_halves(self) -> None:
        sizes = [build_disk_mesh(level).max_edge_length for level in range(5)]

        for coarse, fine in zip(sizes, sizes[1:]):
            assert fine < 0.6 * coarse

    def test_boundary_vertices_stay_on_circle(self, fine_disk: TriMesh) -> None:
        radii = np.linalg.norm(fine_disk.vertices[fine_disk.boundary_nodes], axis=1)

        np.testing.assert_allclose(radii, 1.0, atol=1e-14)

    def test_perimeter_and_area_converge(self, fine_disk: TriMesh) -> None:
        assert abs(fine_disk.perimeter - 2.0 * math.pi) < 1e-3
        assert abs(fine_disk.area - math.pi) < 5e-3

    def test_refinement_is_second_order(self) -> None:
        """Each refine cuts the area and perimeter errors by about four."""
        meshes = [build_disk_mesh(0)]
        for _ in range(4):
            meshes.append(refine(meshes[-1]))
        area_errors = [math.pi - mesh.area for mesh in meshes]
        perimeter_errors = [2.0 * math.pi - mesh.perimeter for mesh in meshes]

        for errors in (area_errors, perimeter_errors):
            for coarse, fine in zip(errors, errors[1:]):
                assert 3.5 <= coarse / fine <= 4.5

    def test_outward_normals(self, disk_mesh: TriMesh) -> None:
        """Normals point away from the origin on the disk."""
        midpoints = disk_mesh.vertices[disk_mesh.boundary_edges].mean(axis=1)
        radial = np.sum(midpoints * disk_mesh.boundary_normals, axis=1)

        assert np.all(radial > 0.99)

    def test_lumped_mass_sums_to_area(self, disk_mesh: TriMesh) -> None:
        assert disk_mesh.lumped_mass.sum() == pytest.approx(disk_mesh.area, rel=1e-14)

    def test_summary_keys(self, coarse_disk: TriMesh) -> None:
        summary = coarse_disk.summary()

        assert summary["level"] == 1
        assert summary["n_cells"] == 48
        assert set(summary) == {"level", "n_vertices", "n_cells", "area", "perimeter", "h"}


class TestHalfDiskMesh:
    def test_trace_segment_is_exact(self, half_disk_mesh: TriMesh) -> None:
        assert half_disk_mesh.tags == frozenset({ARC_TAG, TRACE_TAG})
        assert boundary_measure(half_disk_mesh, [TRACE_TAG]) == pytest.approx(2.0, abs=1e-14)

    def test_origin_is_vertex_at_every_level(self) -> None:
        for level in range(4):
            mesh = build_half_disk_mesh(level)
            assert np.min(np.linalg.norm(mesh.vertices, axis=1)) == 0.0

    def test_unknown_tag_rejected(self, half_disk_mesh: TriMesh) -> None:
        with pytest.raises(MeshError, match="unknown boundary tag"):
            half_disk_mesh.boundary_edge_mask(["inlet"])


class TestGradedMesh:
    """Polar meshes refined toward the origin."""

    def test_anchor_radii_are_rings(self, graded_half_disk: TriMesh) -> None:
        radii = np.linalg.norm(graded_half_disk.vertices, axis=1)

        for r in (1e-1, 1e-2, 1e-3, 1e-4):
            assert np.min(np.abs(radii - r)) < 1e-12 * r

    @pytest.mark.parametrize("r", [1e-1, 1e-2, 1e-3, 1e-4])
    def test_resolves_plateau_radius(self, graded_half_disk: TriMesh, r: float) -> None:
        """Edges meeting the ball of radius r are shorter than r/4."""
        assert graded_half_disk.max_edge_length_near((0.0, 0.0), r) <= 0.25 * r

    def test_graded_disk_has_no_trace_segment(self) -> None:
        mesh = build_graded_disk_mesh(0.05, anchor_radii=[0.05])

        assert mesh.tags == frozenset({ARC_TAG})
        assert abs(mesh.perimeter - 2.0 * math.pi) < 2e-3

    def test_graded_radii_include_anchors_and_outer_radius(self) -> None:
        radii = graded_radii(0.01, 1.1, anchor_radii=[0.3, 0.01])

        assert radii[-1] == 1.0
        assert 0.3 in radii
        assert 0.01 in radii
        assert np.all(np.diff(radii) > 0.0)

    def test_graded_radii_rejects_ratio(self) -> None:
        with pytest.raises(ValueError, match="ratio"):
            graded_radii(0.1, 1.0)


class TestMeshValidation:
    def test_clockwise_cell_rejected(self) -> None:
        with pytest.raises(MeshError, match="non-positive signed area"):
            _single_triangle(clockwise=True)

    def test_missing_boundary_edge_rejected(self) -> None:
        vertices = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        with pytest.raises(MeshError):
            TriMesh(vertices, [[0, 1, 2]], [[0, 1], [1, 2]], ("arc",) * 2)

    def test_tag_count_must_match(self) -> None:
        vertices = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        with pytest.raises(MeshError, match="one tag"):
            TriMesh(vertices, [[0, 1, 2]], [[0, 1], [1, 2], [2, 0]], ("arc",))

    def test_distance_to_edges(self) -> None:
        mesh = _single_triangle()

        distance = mesh.distance_to_edges((0.5, -1.0))

        assert distance.min() == pytest.approx(1.0)


class TestBoundaryQuadrature:
    def test_constant_gives_perimeter(self, disk_mesh: TriMesh) -> None:
        value = boundary_quadrature(disk_mesh, lambda xy: np.ones(len(xy)))

        assert value == pytest.approx(disk_mesh.perimeter, rel=1e-14)

    def test_linear_is_exact_on_trace_segment(self, half_disk_mesh: TriMesh) -> None:
        """∫_{-1}^{1} (x + 1) dx = 2."""
        value = boundary_quadrature(half_disk_mesh, lambda xy: xy[:, 0] + 1.0, [TRACE_TAG])

        assert value == pytest.approx(2.0, abs=1e-13)

    def test_non_finite_boundary_value(self, coarse_disk: TriMesh) -> None:
        values = np.zeros(coarse_disk.n_vertices)
        node = int(coarse_disk.boundary_nodes[3])
        values[node] = np.inf

        with pytest.raises(NonFiniteValueError) as excinfo:
            boundary_quadrature(coarse_disk, values)

        assert excinfo.value.node == node

    def test_wrong_length(self, coarse_disk: TriMesh) -> None:
        with pytest.raises(MeshError, match="nodal values"):
            boundary_quadrature(coarse_disk, np.ones(3))


class TestMeshText:
    def test_write_then_read(self, half_disk_mesh: TriMesh, tmp_path: Path) -> None:
        path = write_mesh_text(half_disk_mesh, tmp_path / "half_disk.txt")

        loaded = read_mesh_text(path)

        np.testing.assert_array_equal(loaded.vertices, half_disk_mesh.vertices)
        np.testing.assert_array_equal(loaded.cells, half_disk_mesh.cells)
        assert loaded.boundary_tags == half_disk_mesh.boundary_tags

    def test_malformed_header(self, tmp_path: Path) -> None:
        path = tmp_path / "bad.txt"
        path.write_text("three vertices\n", encoding="utf-8")

        with pytest.raises(MeshError, match="malformed header"):
            read_mesh_text(path)

    def test_truncated_body(self, tmp_path: Path) -> None:
        path = tmp_path / "short.txt"
        path.write_text("3 1 3\n0 0\n1 0\n", encoding="utf-8")

        with pytest.raises(MeshError, match="expected 8"):
            read_mesh_text(path)
