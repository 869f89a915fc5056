"""Mesh, point-cloud and distance-query tests.

Primitive meshes double as ground truth here: boxes and spheres have
closed-form areas, volumes and distances, so most checks compare the
library output against those.
"""

from __future__ import annotations

import struct

import numpy as np
import pytest
from hypothesis import given, strategies as st

from graspforge.errors import InvalidGeometryError, ReconstructionError
from graspforge.geometry import (
    PointCloud,
    RoiBox,
    TriMesh,
    box_mesh,
    capsule_distance,
    closest_point,
    crop_cloud,
    cylinder_mesh,
    icosphere_mesh,
    load_cloud,
    load_cloud_text,
    load_mesh,
    load_obj,
    load_stl,
    mesh_digest,
    point_in_mesh,
    reconstruct_mesh,
    sample_surface,
)
from graspforge.transforms import Pose


def edge_use_counts(mesh: TriMesh) -> dict:
    counts: dict = {}
    for tri in mesh.faces:
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            key = (min(a, b), max(a, b))
            counts[key] = counts.get(key, 0) + 1
    return counts


def assert_watertight(mesh: TriMesh):
    assert all(c == 2 for c in edge_use_counts(mesh).values())


# ---------------------------------------------------------------------------
# TriMesh construction


def test_degenerate_faces_are_dropped():
    cube = box_mesh([1.0, 1.0, 1.0])
    verts = np.vstack([cube.vertices, cube.vertices[0]])
    dup = len(verts) - 1
    faces = np.vstack([cube.faces, [0, dup, 1]])  # zero area sliver
    mesh = TriMesh(verts, faces)
    assert mesh.num_faces == 12


def test_face_index_out_of_range():
    with pytest.raises(InvalidGeometryError):
        TriMesh(np.zeros((3, 3)), np.array([[0, 1, 5]]))


def test_nonfinite_vertices_rejected():
    verts = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, np.inf, 0.0]])
    with pytest.raises(InvalidGeometryError):
        TriMesh(verts, np.array([[0, 1, 2]]))


def test_face_normals_are_unit():
    mesh = icosphere_mesh(0.3, subdivisions=1)
    norms = np.linalg.norm(mesh.face_normals, axis=1)
    assert np.allclose(norms, 1.0, atol=1e-9)


# ---------------------------------------------------------------------------
# primitives


def test_box_volume_and_area():
    mesh = box_mesh([2.0, 2.0, 2.0])
    assert mesh.volume() == pytest.approx(8.0, abs=1e-9)
    assert mesh.total_area == pytest.approx(24.0, abs=1e-9)
    assert_watertight(mesh)


def test_box_centroid_follows_extents():
    mesh = box_mesh([0.1, 0.2, 0.3])
    assert np.allclose(mesh.volume_centroid(), [0.0, 0.0, 0.0], atol=1e-12)
    shifted = mesh.transformed(Pose([0.5, 0.0, -0.2]))
    assert np.allclose(shifted.volume_centroid(), [0.5, 0.0, -0.2],
                       atol=1e-9)


def test_icosphere_vertices_on_sphere():
    r = 0.25
    mesh = icosphere_mesh(r, subdivisions=2)
    assert np.allclose(np.linalg.norm(mesh.vertices, axis=1), r, atol=1e-9)
    assert_watertight(mesh)
    # refined sphere volume approaches (4/3) pi r^3 from below
    exact = 4.0 / 3.0 * np.pi * r ** 3
    assert 0.95 * exact < mesh.volume() < exact


def test_cylinder_volume_close_to_exact():
    r, h = 0.05, 0.2
    mesh = cylinder_mesh(r, h, segments=64)
    exact = np.pi * r * r * h
    assert mesh.volume() == pytest.approx(exact, rel=0.01)
    assert_watertight(mesh)
    lo, hi = mesh.bounds()
    assert np.allclose(lo, [-r, -r, -h / 2], atol=1e-9)
    assert np.allclose(hi, [r, r, h / 2], atol=1e-9)


def test_cylinder_needs_three_segments():
    with pytest.raises(InvalidGeometryError):
        cylinder_mesh(0.1, 0.1, segments=2)


# ---------------------------------------------------------------------------
# surface sampling


def test_sampling_is_deterministic():
    mesh = box_mesh([0.04, 0.04, 0.04])
    a = sample_surface(mesh, 64, seed=11)
    b = sample_surface(mesh, 64, seed=11)
    assert np.array_equal(np.array([s.point for s in a]),
                          np.array([s.point for s in b]))
    c = sample_surface(mesh, 64, seed=12)
    assert not np.array_equal(np.array([s.point for s in a]),
                              np.array([s.point for s in c]))


def test_samples_lie_on_their_faces():
    mesh = box_mesh([0.04, 0.06, 0.02])
    for s in sample_surface(mesh, 200, seed=0):
        normal = mesh.face_normals[s.face_index]
        vert = mesh.vertices[mesh.faces[s.face_index][0]]
        assert abs(np.dot(s.point - vert, normal)) < 1e-9
        assert np.allclose(s.normal, normal, atol=1e-12)


def test_sampling_density_tracks_area():
    # box with one long axis: the two large side pairs get most samples
    mesh = box_mesh([2.0, 1.0, 1.0])
    n = 100_000
    samples = sample_surface(mesh, n, seed=4)
    sides = np.array([s.face_index // 2 for s in samples])
    areas = np.array([2.0, 2.0, 2.0, 2.0, 1.0, 1.0])
    areas /= areas.sum()
    for side in range(6):
        frac = np.mean(sides == side)
        sigma = np.sqrt(areas[side] * (1 - areas[side]) / n)
        assert abs(frac - areas[side]) < 3.5 * sigma + 1e-4


def test_sampling_single_triangle():
    mesh = TriMesh(np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0],
                             [0.0, 1.0, 0.0]]),
                   np.array([[0, 1, 2]]))
    for s in sample_surface(mesh, 5, seed=0):
        assert abs(s.point[2]) < 1e-12
        assert s.point[0] >= -1e-12 and s.point[1] >= -1e-12
        assert s.point[0] + s.point[1] <= 1.0 + 1e-12


def test_sampling_edge_cases():
    mesh = box_mesh([1.0, 1.0, 1.0])
    assert sample_surface(mesh, 0, seed=0) == []
    empty = TriMesh(np.zeros((0, 3)), np.zeros((0, 3), dtype=int))
    with pytest.raises(InvalidGeometryError):
        sample_surface(empty, 5, seed=0)


# ---------------------------------------------------------------------------
# distance queries


def test_closest_point_above_cube():
    mesh = box_mesh([1.0, 1.0, 1.0])
    point, dist, face = closest_point(mesh, [0.0, 0.0, 5.0])
    assert dist == pytest.approx(4.5, abs=1e-9)
    assert np.allclose(point, [0.0, 0.0, 0.5], atol=1e-9)
    assert mesh.face_normals[face][2] == pytest.approx(1.0)


def test_closest_point_at_vertex():
    mesh = box_mesh([1.0, 1.0, 1.0])
    _, dist, _ = closest_point(mesh, [0.5, 0.5, 0.5])
    assert dist == pytest.approx(0.0, abs=1e-12)


def test_closest_point_sphere_distance():
    mesh = icosphere_mesh(1.0, subdivisions=2)
    _, dist, _ = closest_point(mesh, [2.0, 0.0, 0.0])
    # faceted sphere: true distance 1, slack for the chord sagitta
    assert 1.0 - 1e-9 < dist < 1.012


def test_closest_point_beats_sampled_points():
    mesh = box_mesh([0.3, 0.2, 0.1])
    rng = np.random.default_rng(9)
    for query in rng.normal(scale=0.5, size=(20, 3)):
        point, dist, face = closest_point(mesh, query)
        sampled = np.array([s.point for s in sample_surface(mesh, 500, seed=1)])
        best = np.min(np.linalg.norm(sampled - query, axis=1))
        assert dist <= best + 1e-12
        # returned point really lies on the reported face
        tri = mesh.vertices[mesh.faces[face]]
        normal = mesh.face_normals[face]
        assert abs(np.dot(point - tri[0], normal)) < 1e-9


def test_point_in_mesh_cube():
    mesh = box_mesh([1.0, 1.0, 1.0])
    assert point_in_mesh(mesh, [0.0, 0.0, 0.0])
    assert point_in_mesh(mesh, [0.49, 0.49, 0.49])
    assert not point_in_mesh(mesh, [0.51, 0.0, 0.0])
    assert not point_in_mesh(mesh, [1.0, 1.0, 1.0])


def test_point_in_mesh_sphere():
    mesh = icosphere_mesh(0.2, subdivisions=2)
    assert point_in_mesh(mesh, [0.0, 0.0, 0.0])
    assert not point_in_mesh(mesh, [0.0, 0.0, 0.21])


def test_capsule_distance_far_segment():
    mesh = box_mesh([1.0, 1.0, 1.0])
    p0 = np.array([0.0, 0.0, 2.0])
    p1 = np.array([0.0, 0.0, 3.0])
    dist, mesh_pt, seg_pt, _ = capsule_distance(mesh, p0, p1)
    assert dist == pytest.approx(1.5, abs=1e-9)
    assert np.allclose(seg_pt, p0, atol=1e-9)
    assert np.allclose(mesh_pt, [0.0, 0.0, 0.5], atol=1e-9)


def test_capsule_distance_crossing_is_zero():
    mesh = box_mesh([1.0, 1.0, 1.0])
    dist, _, _, _ = capsule_distance(mesh, [-2.0, 0.0, 0.0],
                                     [2.0, 0.0, 0.0])
    assert dist == 0.0


def test_capsule_distance_side_segment():
    # segment parallel to the top face, one unit above it
    mesh = box_mesh([1.0, 1.0, 1.0])
    dist, mesh_pt, seg_pt, _ = capsule_distance(mesh, [-0.2, 0.0, 1.5],
                                                [0.2, 0.0, 1.5])
    assert dist == pytest.approx(1.0, abs=1e-9)
    assert mesh_pt[2] == pytest.approx(0.5, abs=1e-9)
    assert seg_pt[2] == pytest.approx(1.5, abs=1e-9)
    assert np.allclose(mesh_pt[:2], seg_pt[:2], atol=1e-9)


# ---------------------------------------------------------------------------
# point clouds and cropping


def test_point_cloud_validation():
    with pytest.raises(InvalidGeometryError):
        PointCloud(np.array([[0.0, 0.0]]))
    with pytest.raises(InvalidGeometryError):
        PointCloud(np.array([[0.0, 0.0, np.nan]]))


def test_roi_box_needs_positive_extents():
    with pytest.raises(InvalidGeometryError):
        RoiBox(Pose(), [0.1, 0.0, 0.1])


def test_crop_cloud_axis_aligned():
    corners = np.array([[sx, sy, sz] for sx in (-1, 1)
                        for sy in (-1, 1) for sz in (-1, 1)], dtype=float)
    cloud = PointCloud(corners)
    tight = crop_cloud(cloud, RoiBox(Pose(), [1.0, 1.0, 0.5]))
    assert tight.points.shape == (0, 3)
    exact = crop_cloud(cloud, RoiBox(Pose(), [1.0, 1.0, 1.0]))
    assert exact.points.shape == (8, 3)
    assert np.array_equal(exact.points, corners)  # order preserved


def test_crop_cloud_rotated_box():
    cloud = PointCloud(np.array([[2.0, 0.0, 0.0]]))
    # a box centered at the point, yawed 45 degrees, just large enough
    roi = RoiBox(Pose.from_xyz_rpy([2.0, 0.0, 0.0], [0.0, 0.0, np.pi / 4]),
                 [1.5, 1.5, 1.5])
    assert crop_cloud(cloud, roi).points.shape == (1, 3)
    far = RoiBox(Pose.from_xyz_rpy([0.0, 0.0, 0.0], [0.0, 0.0, np.pi / 4]),
                 [1.0, 1.0, 1.0])
    assert crop_cloud(cloud, far).points.shape == (0, 3)


@given(st.integers(0, 200), st.floats(0.1, 2.0))
def test_crop_cloud_subset_and_idempotent(n, half):
    rng = np.random.default_rng(n)
    pts = rng.uniform(-1.5, 1.5, size=(n, 3))
    cloud = PointCloud(pts)
    roi = RoiBox(Pose(), [half, half, half])
    cropped = crop_cloud(cloud, roi)
    inside = {tuple(p) for p in cropped.points}
    assert inside <= {tuple(p) for p in pts}
    again = crop_cloud(cropped, roi)
    assert np.array_equal(again.points, cropped.points)


# ---------------------------------------------------------------------------
# reconstruction


def test_reconstruct_box_from_corners():
    corners = np.array([[sx, sy, sz] for sx in (-1, 1)
                        for sy in (-1, 1) for sz in (-1, 1)], dtype=float)
    mesh = reconstruct_mesh(PointCloud(corners))
    assert mesh.num_faces == 12
    assert mesh.volume() == pytest.approx(8.0, abs=1e-9)
    assert_watertight(mesh)


def test_reconstruct_sphere_cloud():
    rng = np.random.default_rng(0)
    dirs = rng.normal(size=(1000, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    mesh = reconstruct_mesh(PointCloud(dirs))
    exact = 4.0 / 3.0 * np.pi
    assert 0.9 * exact < mesh.volume() <= exact
    assert mesh.volume() > 0


def test_reconstruct_needs_enough_points():
    with pytest.raises(ReconstructionError):
        reconstruct_mesh(PointCloud(np.eye(3)))


def test_reconstruct_rejects_coplanar_cloud():
    pts = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0],
                    [0.0, 1.0, 0.0], [1.0, 1.0, 0.0],
                    [0.5, 0.5, 0.0]])
    with pytest.raises(ReconstructionError):
        reconstruct_mesh(PointCloud(pts))


# ---------------------------------------------------------------------------
# digests


def test_digest_invariant_to_ordering():
    mesh = box_mesh([0.1, 0.2, 0.3])
    base = mesh_digest(mesh)

    rng = np.random.default_rng(5)
    perm = rng.permutation(mesh.num_vertices)
    inv = np.empty_like(perm)
    inv[perm] = np.arange(len(perm))
    shuffled = TriMesh(mesh.vertices[perm], inv[mesh.faces])
    assert mesh_digest(shuffled) == base

    face_perm = rng.permutation(mesh.num_faces)
    reordered = TriMesh(mesh.vertices, mesh.faces[face_perm])
    assert mesh_digest(reordered) == base

    # rotating indices within a face keeps the winding, same digest
    rolled = TriMesh(mesh.vertices, np.roll(mesh.faces, 1, axis=1))
    assert mesh_digest(rolled) == base


def test_digest_sensitivity():
    mesh = box_mesh([0.1, 0.2, 0.3])
    base = mesh_digest(mesh)
    moved = mesh.transformed(Pose([1.0, 0.0, 0.0]))
    assert mesh_digest(moved) != base

    tiny = TriMesh(mesh.vertices + 1e-9, mesh.faces)
    assert mesh_digest(tiny) == base
    small = TriMesh(mesh.vertices + 1e-5, mesh.faces)
    assert mesh_digest(small) != base

    flipped = TriMesh(mesh.vertices, mesh.faces[:, [0, 2, 1]])
    assert mesh_digest(flipped) != base


# ---------------------------------------------------------------------------
# file input


def test_load_obj_triangulates_quads(tmp_path):
    path = tmp_path / "quad.obj"
    path.write_text(
        "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\n"
        "f 1 2 3 4\n")
    mesh = load_obj(path)
    assert mesh.num_faces == 2
    assert mesh.total_area == pytest.approx(1.0, abs=1e-12)


def test_load_obj_negative_indices(tmp_path):
    path = tmp_path / "neg.obj"
    path.write_text(
        "v 0 0 0\nv 1 0 0\nv 0 1 0\n"
        "f -3 -2 -1\n")
    mesh = load_obj(path)
    assert mesh.num_faces == 1
    assert np.allclose(mesh.vertices[mesh.faces[0]],
                       [[0, 0, 0], [1, 0, 0], [0, 1, 0]])


def _write_binary_stl(path, mesh: TriMesh):
    tris = mesh.vertices[mesh.faces]
    normals = mesh.face_normals
    with open(path, "wb") as fh:
        fh.write(b"\0" * 80)
        fh.write(struct.pack("<I", len(tris)))
        for tri, n in zip(tris, normals):
            fh.write(struct.pack("<3f", *n))
            for v in tri:
                fh.write(struct.pack("<3f", *v))
            fh.write(struct.pack("<H", 0))


def test_load_stl_round_trip(tmp_path):
    cube = box_mesh([1.0, 1.0, 1.0])
    path = tmp_path / "cube.stl"
    _write_binary_stl(path, cube)
    mesh = load_stl(path)
    # STL repeats vertices per facet; loader should weld them again
    assert mesh.num_vertices == 8
    assert mesh.volume() == pytest.approx(1.0, abs=1e-6)


def test_load_stl_truncated(tmp_path):
    path = tmp_path / "bad.stl"
    path.write_bytes(b"\0" * 84)  # header promises 0 facets, then lies
    with open(path, "r+b") as fh:
        fh.seek(80)
        fh.write(struct.pack("<I", 5))
    with pytest.raises(InvalidGeometryError):
        load_stl(path)


def test_load_mesh_dispatch(tmp_path):
    path = tmp_path / "model.xyz"
    path.write_text("whatever")
    with pytest.raises(InvalidGeometryError):
        load_mesh(path)


def test_load_cloud_text():
    cloud = load_cloud_text("# header\n0 0 0\n1.5 2.5 3.5  # trailing note\n")
    assert cloud.points.shape == (2, 3)
    assert np.allclose(cloud.points[1], [1.5, 2.5, 3.5])


def test_load_cloud_text_bad_line():
    with pytest.raises(InvalidGeometryError):
        load_cloud_text("0 0\n")


def test_load_cloud_file(tmp_path):
    path = tmp_path / "cloud.txt"
    path.write_text("0.1 0.2 0.3\n")
    cloud = load_cloud(path)
    assert cloud.points.shape == (1, 3)
    assert np.allclose(cloud.points[0], [0.1, 0.2, 0.3])
