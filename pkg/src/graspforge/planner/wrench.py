"""Wrench-space grasp quality from frictional point contacts.

The metric is the radius of the largest origin-centered ball contained in
the convex hull of the contact primitive wrenches: how large a unit-scaled
disturbance the grasp can reject in its worst direction. Zero means the
hull does not surround the origin (no force closure).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from ..errors import InvalidGeometryError
from ..transforms import orthonormal_tangents

logger = logging.getLogger(__name__)

DEFAULT_CONE_EDGES = 8


@dataclass
class ContactSet:
    """Hard point contacts with friction on one object.

    ``normals`` point into the object (the direction a finger can push).
    ``mu`` is a scalar friction coefficient shared by all contacts or one
    value per contact. ``com`` is the reference point for torques.
    """

    points: np.ndarray
    normals: np.ndarray
    mu: np.ndarray
    com: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        self.points = np.atleast_2d(np.asarray(self.points, dtype=float))
        self.normals = np.atleast_2d(np.asarray(self.normals, dtype=float))
        if self.points.shape != self.normals.shape or self.points.shape[1] != 3:
            raise InvalidGeometryError("contact points/normals must be (N, 3)")
        if len(self.points) == 0:
            raise InvalidGeometryError("contact set is empty")
        norms = np.linalg.norm(self.normals, axis=1)
        if np.any(norms < 1e-9):
            raise InvalidGeometryError("contact normal has near-zero norm")
        self.normals = self.normals / norms[:, None]
        self.mu = np.broadcast_to(
            np.asarray(self.mu, dtype=float), (len(self.points),)).copy()
        if np.any(self.mu < 0.0):
            raise InvalidGeometryError("friction coefficient must be >= 0")
        self.com = np.asarray(self.com, dtype=float).reshape(3)

    def __len__(self):
        return len(self.points)


def primitive_wrenches(contacts: ContactSet,
                       cone_edges: int = DEFAULT_CONE_EDGES) -> np.ndarray:
    """Unit-force wrenches spanning each discretized friction cone.

    Torques are taken about the contact set's reference point and scaled by
    the largest contact distance from it, which makes the force and torque
    components comparable.
    """
    if cone_edges < 3:
        raise InvalidGeometryError("need at least 3 cone edges")
    rho = np.linalg.norm(contacts.points - contacts.com, axis=1).max()
    if rho < 1e-12:
        rho = 1.0
    theta = 2.0 * np.pi * np.arange(cone_edges) / cone_edges
    wrenches = np.empty((len(contacts) * cone_edges, 6))
    row = 0
    for p, n, mu in zip(contacts.points, contacts.normals, contacts.mu):
        t1, t2 = orthonormal_tangents(n)
        arm = p - contacts.com
        for c, s in zip(np.cos(theta), np.sin(theta)):
            f = n + mu * (c * t1 + s * t2)
            f /= np.linalg.norm(f)
            wrenches[row, :3] = f
            wrenches[row, 3:] = np.cross(arm, f) / rho
            row += 1
    return wrenches


def force_closure_epsilon(contacts: ContactSet,
                          cone_edges: int = DEFAULT_CONE_EDGES) -> float:
    """Worst-case disturbance rejection radius in wrench space.

    Returns the smallest origin-to-facet distance of the convex hull of the
    primitive wrenches when the origin lies strictly inside it, else 0.
    A hull that is flat in any wrench direction (fewer than 6 independent
    dimensions) cannot surround the origin, so it also scores 0.
    """
    w = primitive_wrenches(contacts, cone_edges)
    try:
        hull = ConvexHull(w)
    except QhullError:
        return 0.0
    # Qhull facets satisfy normal . x + offset <= 0 inside, so the origin's
    # signed distance to facet k is just offsets[k].
    offsets = hull.equations[:, 6]
    if np.any(offsets >= -1e-12):
        return 0.0
    return float(-offsets.max())
