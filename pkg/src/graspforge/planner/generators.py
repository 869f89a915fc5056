"""Grasp generators: candidate hand placements from object geometry alone.

Generators work entirely in the object frame, so their output is
independent of where the object happens to sit in the world. A candidate
is only emitted when closing the fingers yields at least two contacts
without the palm penetrating the object.
"""

from __future__ import annotations

import logging

import numpy as np

from ..errors import PenetrationError, TaskValidationError
from ..geometry import TriMesh, sample_surface
from ..kinematics import EndEffectorModel, close_fingers
from ..taskmodel import Grasp
from ..transforms import Pose, orthonormal_tangents, quat_from_matrix
from .registry import GENERATOR, default_registry

logger = logging.getLogger(__name__)

MIN_CONTACTS = 2


def _rotz(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _try_close(ee, tcp_pose, mesh, step_size):
    """Close the fingers at this TCP pose; None when the pose is invalid."""
    palm_pose = tcp_pose.compose(ee.tcp_offset.inverse())
    try:
        config, contacts = close_fingers(ee, palm_pose, mesh,
                                         step_size=step_size)
    except PenetrationError:
        return None
    if len(contacts) < MIN_CONTACTS:
        return None
    return Grasp(tcp_in_object=tcp_pose, finger_config=config,
                 ee_name=ee.name, contacts=contacts)


@default_registry.register(GENERATOR, "surface")
class SurfaceGraspGenerator:
    """Approach-along-normal candidates from uniform surface samples.

    Each surface sample yields up to ``roll_count`` candidates: the TCP
    approach axis (+z) is set anti-parallel to the outward normal, the
    hand is backed off by ``standoff`` along the normal, and the remaining
    degree of freedom is swept in equal rolls about the approach axis.
    """

    def __init__(self, n_samples: int = 200, roll_count: int = 8,
                 standoff: float = 0.005, step_size: float | None = None):
        if n_samples <= 0 or roll_count <= 0:
            raise TaskValidationError(
                "surface generator needs positive n_samples and roll_count")
        self.n_samples = int(n_samples)
        self.roll_count = int(roll_count)
        self.standoff = float(standoff)
        self.step_size = step_size

    def generate(self, mesh: TriMesh, ee: EndEffectorModel,
                 seed: int = 0) -> list:
        samples = sample_surface(mesh, self.n_samples, seed)
        rolls = 2.0 * np.pi * np.arange(self.roll_count) / self.roll_count
        grasps = []
        for sample in samples:
            approach = -sample.normal
            t1, t2 = orthonormal_tangents(approach)
            base = np.column_stack([t1, t2, approach])
            position = sample.point + sample.normal * self.standoff
            for roll in rolls:
                quat = quat_from_matrix(base @ _rotz(roll))
                grasp = _try_close(ee, Pose(position, quat), mesh,
                                   self.step_size)
                if grasp is not None:
                    grasps.append(grasp)
        logger.debug("surface generator: %d candidates from %d samples",
                     len(grasps), len(samples))
        return grasps


@default_registry.register(GENERATOR, "antipodal")
class AntipodalGraspGenerator:
    """Two-finger pinches across friction-compatible surface point pairs.

    Samples pairs of surface points and keeps those where the line between
    them lies inside both friction cones and the points are close enough
    for the hand to straddle. Only valid for two-finger parallel hands.
    """

    def __init__(self, n_pairs: int = 500, mu: float = 0.5,
                 max_opening: float | None = None,
                 step_size: float | None = None):
        if n_pairs <= 0:
            raise TaskValidationError("antipodal generator needs n_pairs > 0")
        if mu < 0.0:
            raise TaskValidationError("friction coefficient must be >= 0")
        self.n_pairs = int(n_pairs)
        self.mu = float(mu)
        self.max_opening = max_opening
        self.step_size = step_size

    def generate(self, mesh: TriMesh, ee: EndEffectorModel,
                 seed: int = 0) -> list:
        opening = (float(self.max_opening) if self.max_opening is not None
                   else ee.parallel_gap())
        closing_axis = ee.closing_axis()
        approach_axis = np.array([0.0, 0.0, 1.0])
        if abs(closing_axis @ approach_axis) > 1e-6:
            raise TaskValidationError(
                "antipodal generator needs a closing axis orthogonal to the "
                "palm z axis")
        palm_basis = np.column_stack([
            np.cross(closing_axis, approach_axis), closing_axis, approach_axis])

        samples = sample_surface(mesh, max(2 * self.n_pairs, 16), seed)
        rng = np.random.default_rng(seed + 1)
        # Cone half-angle test via the cosine: cos(atan(mu)) = 1/sqrt(1+mu^2).
        cos_limit = 1.0 / np.sqrt(1.0 + self.mu * self.mu)
        grasps = []
        for _ in range(self.n_pairs):
            i, j = rng.choice(len(samples), size=2, replace=False)
            a, b = samples[i], samples[j]
            span = b.point - a.point
            dist = np.linalg.norm(span)
            if dist < 1e-9 or dist > opening:
                continue
            u = span / dist
            if (u @ -a.normal) < cos_limit - 1e-9:
                continue
            if (-u @ -b.normal) < cos_limit - 1e-9:
                continue
            t1, _ = orthonormal_tangents(u)
            world_basis = np.column_stack([np.cross(u, t1), u, t1])
            rot = world_basis @ palm_basis.T
            center = 0.5 * (a.point + b.point)
            grasp = _try_close(ee, Pose(center, quat_from_matrix(rot)), mesh,
                               self.step_size)
            if grasp is not None:
                grasps.append(grasp)
        logger.debug("antipodal generator: %d candidates from %d pair draws",
                     len(grasps), self.n_pairs)
        return grasps
