"""Rigid transforms and quaternion helpers.

Quaternions are stored as (x, y, z, w) arrays and are kept unit length.
Rotations follow the active convention: ``quat_rotate(q, v)`` rotates the
vector ``v`` by the rotation ``q`` expresses.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidGeometryError

_EPS = 1e-12


def quat_identity() -> np.ndarray:
    return np.array([0.0, 0.0, 0.0, 1.0])


def quat_normalize(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    n = np.linalg.norm(q)
    if n < _EPS:
        raise InvalidGeometryError("quaternion has near-zero norm")
    return q / n


def quat_mul(a, b) -> np.ndarray:
    ax, ay, az, aw = a
    bx, by, bz, bw = b
    return np.array([
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
        aw * bw - ax * bx - ay * by - az * bz,
    ])


def quat_conjugate(q) -> np.ndarray:
    return np.array([-q[0], -q[1], -q[2], q[3]])


def quat_rotate(q, v) -> np.ndarray:
    # q * (v, 0) * q^-1 expanded; cheaper than building the matrix.
    u = np.asarray(q[:3], dtype=float)
    w = float(q[3])
    v = np.asarray(v, dtype=float)
    t = 2.0 * np.cross(u, v)
    return v + w * t + np.cross(u, t)


def quat_to_matrix(q) -> np.ndarray:
    x, y, z, w = q
    xx, yy, zz = x * x, y * y, z * z
    xy, xz, yz = x * y, x * z, y * z
    wx, wy, wz = w * x, w * y, w * z
    return np.array([
        [1.0 - 2.0 * (yy + zz), 2.0 * (xy - wz), 2.0 * (xz + wy)],
        [2.0 * (xy + wz), 1.0 - 2.0 * (xx + zz), 2.0 * (yz - wx)],
        [2.0 * (xz - wy), 2.0 * (yz + wx), 1.0 - 2.0 * (xx + yy)],
    ])


def quat_from_matrix(m) -> np.ndarray:
    """Shepperd's method; stable for all rotation matrices."""
    m = np.asarray(m, dtype=float)
    tr = m[0, 0] + m[1, 1] + m[2, 2]
    if tr > 0.0:
        s = np.sqrt(tr + 1.0) * 2.0
        w = 0.25 * s
        x = (m[2, 1] - m[1, 2]) / s
        y = (m[0, 2] - m[2, 0]) / s
        z = (m[1, 0] - m[0, 1]) / s
    elif m[0, 0] > m[1, 1] and m[0, 0] > m[2, 2]:
        s = np.sqrt(1.0 + m[0, 0] - m[1, 1] - m[2, 2]) * 2.0
        w = (m[2, 1] - m[1, 2]) / s
        x = 0.25 * s
        y = (m[0, 1] + m[1, 0]) / s
        z = (m[0, 2] + m[2, 0]) / s
    elif m[1, 1] > m[2, 2]:
        s = np.sqrt(1.0 + m[1, 1] - m[0, 0] - m[2, 2]) * 2.0
        w = (m[0, 2] - m[2, 0]) / s
        x = (m[0, 1] + m[1, 0]) / s
        y = 0.25 * s
        z = (m[1, 2] + m[2, 1]) / s
    else:
        s = np.sqrt(1.0 + m[2, 2] - m[0, 0] - m[1, 1]) * 2.0
        w = (m[1, 0] - m[0, 1]) / s
        x = (m[0, 2] + m[2, 0]) / s
        y = (m[1, 2] + m[2, 1]) / s
        z = 0.25 * s
    return quat_normalize([x, y, z, w])


def quat_from_axis_angle(axis, angle: float) -> np.ndarray:
    axis = np.asarray(axis, dtype=float)
    n = np.linalg.norm(axis)
    if n < _EPS:
        raise InvalidGeometryError("rotation axis has near-zero norm")
    half = 0.5 * float(angle)
    return np.concatenate([np.sin(half) * axis / n, [np.cos(half)]])


def quat_from_rpy(roll: float, pitch: float, yaw: float) -> np.ndarray:
    """Fixed-axis XYZ (equivalently intrinsic ZYX) roll-pitch-yaw."""
    qx = quat_from_axis_angle([1.0, 0.0, 0.0], roll)
    qy = quat_from_axis_angle([0.0, 1.0, 0.0], pitch)
    qz = quat_from_axis_angle([0.0, 0.0, 1.0], yaw)
    return quat_mul(qz, quat_mul(qy, qx))


def quat_to_rotvec(q) -> np.ndarray:
    """Axis-angle vector of the shortest rotation equivalent to q."""
    q = np.asarray(q, dtype=float)
    if q[3] < 0.0:
        q = -q
    sin_half = np.linalg.norm(q[:3])
    if sin_half < _EPS:
        return 2.0 * q[:3]
    angle = 2.0 * np.arctan2(sin_half, q[3])
    return q[:3] * (angle / sin_half)


def quat_angle(q) -> float:
    """Geodesic rotation angle of q, in [0, pi]."""
    q = np.asarray(q, dtype=float)
    return float(2.0 * np.arctan2(np.linalg.norm(q[:3]), abs(q[3])))


def quat_angle_between(a, b) -> float:
    return quat_angle(quat_mul(a, quat_conjugate(b)))


def orthonormal_tangents(n):
    """Deterministic right-handed tangent pair (t1, t2) for a unit vector."""
    n = np.asarray(n, dtype=float)
    ref = np.array([1.0, 0.0, 0.0])
    if abs(n @ ref) > 0.9:
        ref = np.array([0.0, 1.0, 0.0])
    t1 = np.cross(ref, n)
    t1 /= np.linalg.norm(t1)
    return t1, np.cross(n, t1)


@dataclass
class Pose:
    """Rigid transform: rotation (unit quaternion, xyzw) then translation."""

    position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    orientation: np.ndarray = field(default_factory=quat_identity)

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float).reshape(3)
        if not np.all(np.isfinite(self.position)):
            raise InvalidGeometryError("pose position is not finite")
        self.orientation = quat_normalize(self.orientation)

    @staticmethod
    def identity() -> "Pose":
        return Pose()

    @staticmethod
    def from_xyz_rpy(xyz, rpy) -> "Pose":
        r, p, y = rpy
        return Pose(np.asarray(xyz, dtype=float), quat_from_rpy(r, p, y))

    @staticmethod
    def from_matrix(m) -> "Pose":
        m = np.asarray(m, dtype=float)
        return Pose(m[:3, 3], quat_from_matrix(m[:3, :3]))

    def matrix(self) -> np.ndarray:
        m = np.eye(4)
        m[:3, :3] = quat_to_matrix(self.orientation)
        m[:3, 3] = self.position
        return m

    def compose(self, other: "Pose") -> "Pose":
        """self applied first in the parent frame, then other in self's frame."""
        return Pose(
            self.position + quat_rotate(self.orientation, other.position),
            quat_mul(self.orientation, other.orientation),
        )

    def inverse(self) -> "Pose":
        q_inv = quat_conjugate(self.orientation)
        return Pose(-quat_rotate(q_inv, self.position), q_inv)

    def transform_point(self, p) -> np.ndarray:
        return self.position + quat_rotate(self.orientation, p)

    def transform_points(self, pts: np.ndarray) -> np.ndarray:
        pts = np.asarray(pts, dtype=float)
        return pts @ quat_to_matrix(self.orientation).T + self.position

    def rotate(self, v) -> np.ndarray:
        return quat_rotate(self.orientation, v)

    def to_dict(self) -> dict:
        return {
            "xyz": [float(v) for v in self.position],
            "quat": [float(v) for v in self.orientation],
        }

    @staticmethod
    def from_dict(doc: dict) -> "Pose":
        xyz = doc.get("xyz", [0.0, 0.0, 0.0])
        if "quat" in doc:
            return Pose(xyz, doc["quat"])
        if "rpy" in doc:
            return Pose.from_xyz_rpy(xyz, doc["rpy"])
        return Pose(xyz, quat_identity())

    def approx_equal(self, other: "Pose", pos_tol=1e-9, rot_tol=1e-9) -> bool:
        return (np.linalg.norm(self.position - other.position) <= pos_tol
                and quat_angle_between(self.orientation, other.orientation) <= rot_tol)

    def __repr__(self):
        p = ", ".join(f"{v:.6g}" for v in self.position)
        q = ", ".join(f"{v:.6g}" for v in self.orientation)
        return f"Pose(xyz=[{p}], quat=[{q}])"
