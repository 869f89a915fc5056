"""Triangle meshes, point clouds, and the queries the planner needs.

All lengths are meters. Meshes keep float64 vertices and int64 faces;
degenerate faces (area below 1e-12 m^2) are dropped on construction so the
distance and sampling code never has to special-case them.
"""

from __future__ import annotations

import hashlib
import logging
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .errors import InvalidGeometryError, ReconstructionError
from .transforms import Pose

logger = logging.getLogger(__name__)

DEGENERATE_FACE_AREA = 1e-12
DIGEST_QUANTUM = 1e-6


class TriMesh:
    """Indexed triangle mesh.

    Parameters
    ----------
    vertices : (V, 3) array_like
    faces : (F, 3) array_like of vertex indices

    Faces with area below ``DEGENERATE_FACE_AREA`` are removed. Vertex order
    within a face defines the outward normal (right-hand rule).
    """

    def __init__(self, vertices, faces):
        self.vertices = np.atleast_2d(np.asarray(vertices, dtype=float))
        self.faces = np.atleast_2d(np.asarray(faces, dtype=np.int64))
        if self.vertices.ndim != 2 or self.vertices.shape[1] != 3:
            raise InvalidGeometryError("vertices must be an (V, 3) array")
        if self.faces.size and (self.faces.ndim != 2 or self.faces.shape[1] != 3):
            raise InvalidGeometryError("faces must be an (F, 3) array")
        if not np.all(np.isfinite(self.vertices)):
            raise InvalidGeometryError("mesh vertices contain NaN or Inf")
        if self.faces.size:
            if self.faces.min() < 0 or self.faces.max() >= len(self.vertices):
                raise InvalidGeometryError("face index out of range")
        self._drop_degenerate()
        self._accel = None

    def _drop_degenerate(self):
        if not self.faces.size:
            self.face_normals = np.zeros((0, 3))
            self.face_areas = np.zeros(0)
            return
        tri = self.vertices[self.faces]
        cross = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
        double_area = np.linalg.norm(cross, axis=1)
        keep = double_area * 0.5 >= DEGENERATE_FACE_AREA
        dropped = int((~keep).sum())
        if dropped:
            logger.debug("dropping %d degenerate faces", dropped)
            self.faces = self.faces[keep]
            cross = cross[keep]
            double_area = double_area[keep]
        self.face_normals = cross / double_area[:, None]
        self.face_areas = 0.5 * double_area

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_faces(self) -> int:
        return len(self.faces)

    @property
    def is_empty(self) -> bool:
        return self.num_faces == 0

    @property
    def total_area(self) -> float:
        return float(self.face_areas.sum())

    def bounds(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def volume(self) -> float:
        """Signed volume; positive for watertight outward-oriented meshes."""
        tri = self.vertices[self.faces]
        return float(np.einsum("ij,ij->i", tri[:, 0],
                               np.cross(tri[:, 1], tri[:, 2])).sum() / 6.0)

    def volume_centroid(self) -> np.ndarray:
        """Centroid of the enclosed volume; vertex mean if volume vanishes."""
        tri = self.vertices[self.faces]
        det = np.einsum("ij,ij->i", tri[:, 0], np.cross(tri[:, 1], tri[:, 2]))
        vol = det.sum() / 6.0
        if abs(vol) < 1e-12:
            return self.vertices.mean(axis=0)
        weighted = (tri.sum(axis=1) / 4.0) * (det / 6.0)[:, None]
        return weighted.sum(axis=0) / vol

    def transformed(self, pose: Pose) -> "TriMesh":
        return TriMesh(pose.transform_points(self.vertices), self.faces.copy())

    def _accelerator(self):
        if self._accel is None:
            self._accel = _MeshAccel(self)
        return self._accel

    def __repr__(self):
        return f"TriMesh({self.num_vertices} vertices, {self.num_faces} faces)"


class _MeshAccel:
    """Precomputed arrays for repeated distance queries against one mesh."""

    def __init__(self, mesh: TriMesh):
        tri = mesh.vertices[mesh.faces]
        self.a = tri[:, 0]
        self.b = tri[:, 1]
        self.c = tri[:, 2]
        self.ab = self.b - self.a
        self.ac = self.c - self.a
        # Edge list laid out face-major so edge_index // 3 recovers the face.
        self.edge_p = np.concatenate([self.a, self.b, self.c])
        self.edge_q = np.concatenate([self.b, self.c, self.a])
        self.edge_face = np.concatenate([np.arange(len(tri))] * 3)


@dataclass
class SurfaceSample:
    """A point on a mesh surface with its outward unit normal."""

    point: np.ndarray
    normal: np.ndarray
    face_index: int


@dataclass
class PointCloud:
    """Unordered 3D points in a named frame."""

    points: np.ndarray
    frame: str = "world"

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        if self.points.size == 0:
            self.points = self.points.reshape(0, 3)
        if self.points.shape[1] != 3:
            raise InvalidGeometryError("cloud points must be (N, 3)")
        if not np.all(np.isfinite(self.points)):
            raise InvalidGeometryError("cloud contains NaN or Inf points")

    def __len__(self):
        return len(self.points)


@dataclass
class RoiBox:
    """Axis-aligned box in its own frame, posed in the cloud frame."""

    pose: Pose
    half_extents: np.ndarray = field(default_factory=lambda: np.ones(3))

    def __post_init__(self):
        self.half_extents = np.asarray(self.half_extents, dtype=float).reshape(3)
        if np.any(self.half_extents <= 0.0):
            raise InvalidGeometryError("ROI half extents must be positive")


@dataclass(frozen=True)
class MeshDigest:
    """Content digest of a mesh at 1e-6 m resolution."""

    hex: str

    def __str__(self):
        return self.hex


# ---------------------------------------------------------------------------
# Loading


def load_obj(path) -> TriMesh:
    vertices = []
    faces = []
    with open(path, "r") as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                vertices.append([float(x) for x in parts[1:4]])
            elif parts[0] == "f":
                idx = [int(p.split("/")[0]) for p in parts[1:]]
                idx = [i - 1 if i > 0 else len(vertices) + i for i in idx]
                for k in range(1, len(idx) - 1):
                    faces.append([idx[0], idx[k], idx[k + 1]])
    if not vertices or not faces:
        raise InvalidGeometryError(f"no usable geometry in OBJ file {path}")
    return TriMesh(vertices, faces)


def load_stl(path) -> TriMesh:
    """Binary STL. Exact-duplicate vertices are welded so shared edges exist."""
    raw = Path(path).read_bytes()
    if len(raw) < 84:
        raise InvalidGeometryError(f"{path} is too short to be a binary STL")
    (count,) = struct.unpack_from("<I", raw, 80)
    expected = 84 + 50 * count
    if len(raw) != expected:
        raise InvalidGeometryError(
            f"{path} does not look like a binary STL "
            f"(expected {expected} bytes for {count} triangles, got {len(raw)})")
    data = np.frombuffer(raw, dtype=np.uint8, count=50 * count, offset=84)
    data = data.reshape(count, 50)
    tris = data[:, 12:48].copy().view("<f4").reshape(count, 3, 3).astype(float)
    flat = tris.reshape(-1, 3)
    uniq, inverse = np.unique(flat, axis=0, return_inverse=True)
    faces = inverse.reshape(count, 3)
    return TriMesh(uniq, faces)


def load_mesh(path) -> TriMesh:
    suffix = Path(path).suffix.lower()
    if suffix == ".obj":
        return load_obj(path)
    if suffix == ".stl":
        return load_stl(path)
    raise InvalidGeometryError(f"unsupported mesh format: {path}")


def load_cloud_text(text: str, frame: str = "world") -> PointCloud:
    """Whitespace-separated x y z per line; '#' starts a comment."""
    rows = []
    for ln, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 3:
            raise InvalidGeometryError(f"cloud line {ln}: expected 3 values")
        rows.append([float(v) for v in parts[:3]])
    return PointCloud(np.array(rows).reshape(-1, 3), frame)


def load_cloud(path, frame: str = "world") -> PointCloud:
    return load_cloud_text(Path(path).read_text(), frame)


# ---------------------------------------------------------------------------
# Primitive meshes


def box_mesh(size) -> TriMesh:
    """Axis-aligned box centered at the origin; size is full extent per axis."""
    sx, sy, sz = (float(v) / 2.0 for v in size)
    v = np.array([
        [-sx, -sy, -sz], [sx, -sy, -sz], [sx, sy, -sz], [-sx, sy, -sz],
        [-sx, -sy, sz], [sx, -sy, sz], [sx, sy, sz], [-sx, sy, sz],
    ])
    # Two triangles per side, sides ordered -z, +z, -y, +y, -x, +x.
    f = np.array([
        [0, 2, 1], [0, 3, 2],
        [4, 5, 6], [4, 6, 7],
        [0, 1, 5], [0, 5, 4],
        [2, 3, 7], [2, 7, 6],
        [3, 0, 4], [3, 4, 7],
        [1, 2, 6], [1, 6, 5],
    ])
    return TriMesh(v, f)


def cylinder_mesh(radius: float, height: float, segments: int = 32) -> TriMesh:
    """Closed cylinder along z, centered at the origin."""
    if segments < 3:
        raise InvalidGeometryError("cylinder needs at least 3 segments")
    ang = 2.0 * np.pi * np.arange(segments) / segments
    ring = np.stack([radius * np.cos(ang), radius * np.sin(ang)], axis=1)
    lo = np.column_stack([ring, np.full(segments, -height / 2.0)])
    hi = np.column_stack([ring, np.full(segments, height / 2.0)])
    centers = np.array([[0.0, 0.0, -height / 2.0], [0.0, 0.0, height / 2.0]])
    v = np.vstack([lo, hi, centers])
    ci_lo, ci_hi = 2 * segments, 2 * segments + 1
    faces = []
    for i in range(segments):
        j = (i + 1) % segments
        faces.append([i, j, segments + i])
        faces.append([j, segments + j, segments + i])
        faces.append([ci_lo, j, i])
        faces.append([ci_hi, segments + i, segments + j])
    return TriMesh(v, faces)


def icosphere_mesh(radius: float = 1.0, subdivisions: int = 2) -> TriMesh:
    """Subdivided icosahedron; all vertices lie on the sphere."""
    t = (1.0 + np.sqrt(5.0)) / 2.0
    v = np.array([
        [-1, t, 0], [1, t, 0], [-1, -t, 0], [1, -t, 0],
        [0, -1, t], [0, 1, t], [0, -1, -t], [0, 1, -t],
        [t, 0, -1], [t, 0, 1], [-t, 0, -1], [-t, 0, 1],
    ], dtype=float)
    v /= np.linalg.norm(v[0])
    f = [
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ]
    verts = [row for row in v]
    for _ in range(subdivisions):
        cache = {}
        new_faces = []

        def midpoint(i, j):
            key = (min(i, j), max(i, j))
            if key not in cache:
                m = verts[i] + verts[j]
                m /= np.linalg.norm(m)
                verts.append(m)
                cache[key] = len(verts) - 1
            return cache[key]

        for a, b, c in f:
            ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
            new_faces += [[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]
        f = new_faces
    return TriMesh(np.array(verts) * radius, f)


# ---------------------------------------------------------------------------
# Surface sampling


def sample_surface(mesh: TriMesh, n: int, seed: int = 0) -> list[SurfaceSample]:
    """Uniform area-weighted samples; deterministic for a given seed."""
    if mesh.is_empty:
        raise InvalidGeometryError("cannot sample an empty mesh")
    if n <= 0:
        return []
    rng = np.random.default_rng(seed)
    weights = mesh.face_areas / mesh.total_area
    face_idx = rng.choice(mesh.num_faces, size=n, p=weights)
    r1 = rng.random(n)
    r2 = rng.random(n)
    sqrt_r1 = np.sqrt(r1)
    u = 1.0 - sqrt_r1
    v = r2 * sqrt_r1
    tri = mesh.vertices[mesh.faces[face_idx]]
    pts = (tri[:, 0] * u[:, None] + tri[:, 1] * v[:, None]
           + tri[:, 2] * (1.0 - u - v)[:, None])
    normals = mesh.face_normals[face_idx]
    return [SurfaceSample(pts[i], normals[i], int(face_idx[i])) for i in range(n)]


# ---------------------------------------------------------------------------
# Distance queries


def _closest_on_triangles(p, a, b, c, ab, ac):
    """Closest point to p on each triangle (Ericson's region tests, batched)."""
    ap = p - a
    d1 = np.einsum("ij,ij->i", ab, ap)
    d2 = np.einsum("ij,ij->i", ac, ap)
    bp = p - b
    d3 = np.einsum("ij,ij->i", ab, bp)
    d4 = np.einsum("ij,ij->i", ac, bp)
    cp = p - c
    d5 = np.einsum("ij,ij->i", ab, cp)
    d6 = np.einsum("ij,ij->i", ac, cp)

    vc = d1 * d4 - d3 * d2
    vb = d5 * d2 - d1 * d6
    va = d3 * d6 - d5 * d4

    with np.errstate(divide="ignore", invalid="ignore"):
        # Face interior (fallback when no edge/vertex region matches).
        denom = va + vb + vc
        denom = np.where(np.abs(denom) < 1e-300, 1.0, denom)
        v_f = vb / denom
        w_f = vc / denom
        res = a + ab * v_f[:, None] + ac * w_f[:, None]

        # Edge BC region.
        e_bc = (d4 - d3) / np.where(np.abs((d4 - d3) + (d5 - d6)) < 1e-300, 1.0,
                                    (d4 - d3) + (d5 - d6))
        cand = b + (c - b) * np.clip(e_bc, 0.0, 1.0)[:, None]
        m = (va <= 0.0) & ((d4 - d3) >= 0.0) & ((d5 - d6) >= 0.0)
        res = np.where(m[:, None], cand, res)

        # Edge AC region.
        w_ac = d2 / np.where(np.abs(d2 - d6) < 1e-300, 1.0, d2 - d6)
        cand = a + ac * np.clip(w_ac, 0.0, 1.0)[:, None]
        m = (vb <= 0.0) & (d2 >= 0.0) & (d6 <= 0.0)
        res = np.where(m[:, None], cand, res)

        # Vertex C region.
        m = (d6 >= 0.0) & (d5 <= d6)
        res = np.where(m[:, None], c, res)

        # Edge AB region.
        v_ab = d1 / np.where(np.abs(d1 - d3) < 1e-300, 1.0, d1 - d3)
        cand = a + ab * np.clip(v_ab, 0.0, 1.0)[:, None]
        m = (vc <= 0.0) & (d1 >= 0.0) & (d3 <= 0.0)
        res = np.where(m[:, None], cand, res)

        # Vertex B region.
        m = (d3 >= 0.0) & (d4 <= d3)
        res = np.where(m[:, None], b, res)

        # Vertex A region.
        m = (d1 <= 0.0) & (d2 <= 0.0)
        res = np.where(m[:, None], a, res)
    return res


def point_in_mesh(mesh: TriMesh, point) -> bool:
    """Ray-parity containment test for a watertight mesh.

    Casts along an oblique fixed direction so axis-aligned geometry does not
    put the ray through an edge. An odd crossing count means inside.
    """
    if mesh.is_empty:
        raise InvalidGeometryError("cannot query an empty mesh")
    acc = mesh._accelerator()
    p = np.asarray(point, dtype=float).reshape(3)
    direction = np.array([0.57231324, 0.33147973, 0.75004334])
    lo = mesh.vertices.min(axis=0)
    hi = mesh.vertices.max(axis=0)
    reach = float(np.linalg.norm(hi - lo)) + 1.0
    far = p + direction * 2.0 * reach
    hit, _ = _segment_hits_triangles(p, far, acc.a, acc.ab, acc.ac)
    return bool(np.count_nonzero(hit) % 2 == 1)


def closest_point(mesh: TriMesh, query):
    """Closest surface point to query.

    Returns (point, distance, face_index). Ties resolve to the lowest face
    index, which keeps repeated runs deterministic.
    """
    if mesh.is_empty:
        raise InvalidGeometryError("cannot query an empty mesh")
    acc = mesh._accelerator()
    p = np.asarray(query, dtype=float).reshape(3)
    pts = _closest_on_triangles(p, acc.a, acc.b, acc.c, acc.ab, acc.ac)
    d2 = np.einsum("ij,ij->i", pts - p, pts - p)
    i = int(np.argmin(d2))
    return pts[i].copy(), float(np.sqrt(d2[i])), i


def _segment_to_segments(p0, p1, q0, q1):
    """Closest points between one segment (p0, p1) and many (q0, q1) rows."""
    d1 = p1 - p0
    d2 = q1 - q0
    r = p0 - q0
    a = float(np.dot(d1, d1))
    e = np.einsum("ij,ij->i", d2, d2)
    f = np.einsum("ij,ij->i", d2, r)
    c = np.einsum("j,ij->i", d1, r)
    b = np.einsum("j,ij->i", d1, d2)
    denom = a * e - b * b
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(denom > 1e-300, np.clip((b * f - c * e) / np.where(
            denom > 1e-300, denom, 1.0), 0.0, 1.0), 0.0)
        t = np.where(e > 1e-300, (b * s + f) / np.where(e > 1e-300, e, 1.0), 0.0)
        t_cl = np.clip(t, 0.0, 1.0)
        recompute = t != t_cl
        if a > 1e-300:
            s = np.where(recompute, np.clip((b * t_cl - c) / a, 0.0, 1.0), s)
        else:
            s = np.zeros_like(s)
    cp_p = p0 + np.outer(s, d1)
    cp_q = q0 + d2 * t_cl[:, None]
    return cp_p, cp_q, s


def _segment_hits_triangles(p0, p1, a, ab, ac):
    """Per-face flag plus hit point for segment-triangle intersections."""
    d = p1 - p0
    pvec = np.cross(d, ac)
    det = np.einsum("ij,ij->i", ab, pvec)
    ok = np.abs(det) > 1e-300
    inv = np.where(ok, 1.0 / np.where(ok, det, 1.0), 0.0)
    tvec = p0 - a
    u = np.einsum("ij,ij->i", tvec, pvec) * inv
    qvec = np.cross(tvec, ab)
    v = np.einsum("j,ij->i", d, qvec) * inv
    t = np.einsum("ij,ij->i", ac, qvec) * inv
    tol = 1e-12
    hit = (ok & (u >= -tol) & (v >= -tol) & (u + v <= 1.0 + tol)
           & (t >= -tol) & (t <= 1.0 + tol))
    return hit, p0 + np.outer(np.clip(t, 0.0, 1.0), d)


def capsule_distance(mesh: TriMesh, p0, p1):
    """Distance from the segment (p0, p1) to the mesh surface.

    Returns (distance, point_on_mesh, point_on_segment, face_index); distance
    is 0 when the segment crosses the surface. Subtract the capsule radius to
    get the swept-sphere clearance.
    """
    if mesh.is_empty:
        raise InvalidGeometryError("cannot query an empty mesh")
    acc = mesh._accelerator()
    p0 = np.asarray(p0, dtype=float).reshape(3)
    p1 = np.asarray(p1, dtype=float).reshape(3)

    hit, hit_pts = _segment_hits_triangles(p0, p1, acc.a, acc.ab, acc.ac)
    if np.any(hit):
        i = int(np.argmax(hit))
        return 0.0, hit_pts[i].copy(), hit_pts[i].copy(), i

    best_d2 = np.inf
    best = None
    for endpoint in (p0, p1):
        pts = _closest_on_triangles(endpoint, acc.a, acc.b, acc.c, acc.ab, acc.ac)
        d2 = np.einsum("ij,ij->i", pts - endpoint, pts - endpoint)
        i = int(np.argmin(d2))
        if d2[i] < best_d2:
            best_d2 = d2[i]
            best = (pts[i].copy(), endpoint.copy(), i)

    cp_seg, cp_edge, _ = _segment_to_segments(p0, p1, acc.edge_p, acc.edge_q)
    diff = cp_seg - cp_edge
    d2 = np.einsum("ij,ij->i", diff, diff)
    i = int(np.argmin(d2))
    if d2[i] < best_d2:
        best_d2 = d2[i]
        best = (cp_edge[i].copy(), cp_seg[i].copy(), int(acc.edge_face[i]))

    mesh_pt, seg_pt, face = best
    return float(np.sqrt(best_d2)), mesh_pt, seg_pt, face


# ---------------------------------------------------------------------------
# Cloud operations


def crop_cloud(cloud: PointCloud, box: RoiBox) -> PointCloud:
    """Points inside (or on) the box, original order preserved."""
    local = box.pose.inverse().transform_points(cloud.points)
    mask = np.all(np.abs(local) <= box.half_extents, axis=1)
    return PointCloud(cloud.points[mask].copy(), cloud.frame)


def reconstruct_mesh(cloud: PointCloud) -> TriMesh:
    """Convex hull of the cloud as a watertight, outward-oriented mesh."""
    if len(cloud) < 4:
        raise ReconstructionError(
            f"need at least 4 points for reconstruction, got {len(cloud)}")
    try:
        hull = ConvexHull(cloud.points)
    except QhullError as exc:
        raise ReconstructionError(f"degenerate point set: {exc}") from exc
    used = hull.vertices
    remap = np.full(len(cloud.points), -1, dtype=np.int64)
    remap[used] = np.arange(len(used))
    vertices = cloud.points[used]
    faces = remap[hull.simplices]
    # Qhull's facet normals point outward; flip triangles that disagree.
    tri = vertices[faces]
    n = np.cross(tri[:, 1] - tri[:, 0], tri[:, 2] - tri[:, 0])
    flip = np.einsum("ij,ij->i", n, hull.equations[:, :3]) < 0.0
    faces[flip] = faces[flip][:, [0, 2, 1]]
    return TriMesh(vertices, faces)


# ---------------------------------------------------------------------------
# Digest


def mesh_digest(mesh: TriMesh) -> MeshDigest:
    """256-bit content digest, stable under vertex/face reordering.

    Coordinates are snapped to a 1e-6 m grid first, so meshes differing by
    less than the grid step hash identically while any displacement larger
    than one step changes the digest.
    """
    q = np.round(mesh.vertices / DIGEST_QUANTUM).astype(np.int64)
    order = np.lexsort((q[:, 2], q[:, 1], q[:, 0]))
    q_sorted = q[order]
    remap = np.empty(len(q), dtype=np.int64)
    remap[order] = np.arange(len(q))
    faces = remap[mesh.faces] if mesh.faces.size else mesh.faces
    if faces.size:
        # Rotate each face so its smallest index leads; cyclic order (and so
        # the outward orientation) is preserved.
        start = np.argmin(faces, axis=1)
        cols = (start[:, None] + np.arange(3)[None, :]) % 3
        faces = np.take_along_axis(faces, cols, axis=1)
        faces = faces[np.lexsort((faces[:, 2], faces[:, 1], faces[:, 0]))]
    h = hashlib.sha256()
    h.update(b"graspforge-mesh-v1")
    h.update(np.ascontiguousarray(q_sorted, dtype="<i8").tobytes())
    h.update(b"|")
    h.update(np.ascontiguousarray(faces, dtype="<i8").tobytes())
    return MeshDigest(h.hexdigest())
