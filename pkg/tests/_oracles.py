"""Independent reference computations that pin expected values in tests.

These deliberately avoid the code paths used by the package: the ball
radius here is found by solving each hull facet's hyperplane from its own
vertices and testing origin membership with a linear program, so agreement
with the production implementation is meaningful.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError


def origin_in_hull(points: np.ndarray) -> bool:
    """Is the origin a convex combination of the given points?

    Feasibility LP: lambda >= 0, sum(lambda) = 1, points^T lambda = 0.
    """
    pts = np.asarray(points, dtype=float)
    n, d = pts.shape
    a_eq = np.vstack([pts.T, np.ones((1, n))])
    b_eq = np.concatenate([np.zeros(d), [1.0]])
    res = linprog(np.zeros(n), A_eq=a_eq, b_eq=b_eq,
                  bounds=[(0.0, None)] * n, method="highs")
    return res.status == 0


def oracle_ball_radius(points: np.ndarray) -> float:
    """Largest origin-centered ball inside the convex hull of the points.

    Brute force: when the origin is inside, each facet simplex's
    supporting hyperplane is recovered from its own vertices by SVD and
    its distance to the origin is |normal . centroid|. The radius is the
    minimum such distance. Outside or boundary cases give 0, as do hulls
    that are flat in any direction.

    Qhull triangulates merged facets, and some simplices of such a
    triangulation are zero-volume slivers whose vertices pin down no
    unique plane. Those get skipped: a facet with positive measure always
    contains at least one non-degenerate simplex carrying its plane.
    """
    pts = np.asarray(points, dtype=float)
    if not origin_in_hull(pts):
        return 0.0
    try:
        hull = ConvexHull(pts)
    except QhullError:
        return 0.0
    best = np.inf
    for simplex in hull.simplices:
        v = pts[simplex]
        center = v.mean(axis=0)
        sv, vt = np.linalg.svd(v - center)[1:]
        if sv[-2] <= 1e-8 * max(sv[0], 1e-30):
            continue  # degenerate sliver, no unique hyperplane
        normal = vt[-1]
        best = min(best, abs(float(np.dot(normal, center))))
    return float(best) if np.isfinite(best) else 0.0


def planar_2r_ik(target_xy, l1: float = 1.0, l2: float = 1.0):
    """Closed-form elbow solutions for a two-revolute planar arm.

    Returns a list of (q1, q2) pairs reaching target_xy with the tip at
    the end of link 2; empty when the point is outside the annulus.
    """
    x, y = float(target_xy[0]), float(target_xy[1])
    r2 = x * x + y * y
    c2 = (r2 - l1 * l1 - l2 * l2) / (2.0 * l1 * l2)
    if c2 < -1.0 - 1e-12 or c2 > 1.0 + 1e-12:
        return []
    c2 = min(1.0, max(-1.0, c2))
    s2 = np.sqrt(1.0 - c2 * c2)
    out = []
    for sign in (1.0, -1.0):
        q2 = np.arctan2(sign * s2, c2)
        q1 = np.arctan2(y, x) - np.arctan2(l2 * np.sin(q2),
                                           l1 + l2 * np.cos(q2))
        out.append((float(q1), float(q2)))
    return out
