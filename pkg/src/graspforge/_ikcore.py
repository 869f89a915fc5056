"""Compiled inner loop for the damped-least-squares IK descent.

The pure-numpy descent in :mod:`kinematics` spends most of its time in
interpreter overhead on small matrices, which dominates planning runtime
on single-core hosts. This module holds an equivalent kernel compiled
with numba, operating on the chain packed into flat arrays. When numba
is unavailable the solver transparently falls back to the numpy path;
results agree to solver tolerance either way.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_KERNEL = True
except ImportError:  # pragma: no cover - numba present in supported envs
    HAVE_KERNEL = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap


@njit(cache=True)
def _rotvec_of(m):
    """Rotation vector of a 3x3 rotation matrix, via Shepperd quaternion."""
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
    n = np.sqrt(x * x + y * y + z * z + w * w)
    x /= n
    y /= n
    z /= n
    w /= n
    if w < 0.0:
        x, y, z, w = -x, -y, -z, -w
    out = np.empty(3)
    sin_half = np.sqrt(x * x + y * y + z * z)
    if sin_half < 1e-12:
        out[0] = 2.0 * x
        out[1] = 2.0 * y
        out[2] = 2.0 * z
        return out
    angle = 2.0 * np.arctan2(sin_half, w)
    scale = angle / sin_half
    out[0] = x * scale
    out[1] = y * scale
    out[2] = z * scale
    return out


@njit(cache=True)
def dls_descent(origin_r, origin_t, axes, skew, skew2, prismatic,
                lower, upper, target_r, target_p, q_start,
                pos_tol, rot_tol, max_iters, damping_sq, max_step,
                stall_iters, stall_improvement):
    """One clamped DLS descent; returns (q, converged).

    Mirrors the numpy implementation in kinematics exactly: same error
    metric, damping, step clamp, limit clamping, and stall early-exit.
    """
    n = q_start.shape[0]
    q = np.minimum(np.maximum(q_start, lower), upper)
    jac = np.zeros((6, n))
    err = np.empty(6)
    anchors = np.empty((n, 3))
    world_axes = np.empty((n, 3))
    best = np.inf
    stall = 0
    for _ in range(max_iters):
        r = np.eye(3)
        p = np.zeros(3)
        for i in range(n):
            p = p + r @ origin_t[i]
            r = r @ origin_r[i]
            anchors[i] = p
            world_axes[i] = r @ axes[i]
            if prismatic[i]:
                p = p + world_axes[i] * q[i]
            else:
                rot = np.eye(3) + np.sin(q[i]) * skew[i] \
                    + (1.0 - np.cos(q[i])) * skew2[i]
                r = r @ rot

        err[0] = target_p[0] - p[0]
        err[1] = target_p[1] - p[1]
        err[2] = target_p[2] - p[2]
        rel = target_r @ r.T
        rv = _rotvec_of(rel)
        err[3] = rv[0]
        err[4] = rv[1]
        err[5] = rv[2]
        pos_err = np.sqrt(err[0] ** 2 + err[1] ** 2 + err[2] ** 2)
        rot_err = np.sqrt(err[3] ** 2 + err[4] ** 2 + err[5] ** 2)
        if pos_err <= pos_tol and rot_err <= rot_tol:
            return q, True
        total = pos_err + rot_err
        if total < best - stall_improvement:
            best = total
            stall = 0
        else:
            stall += 1
            if stall >= stall_iters:
                return q, False

        for i in range(n):
            if prismatic[i]:
                jac[0, i] = world_axes[i, 0]
                jac[1, i] = world_axes[i, 1]
                jac[2, i] = world_axes[i, 2]
                jac[3, i] = 0.0
                jac[4, i] = 0.0
                jac[5, i] = 0.0
            else:
                rx = p[0] - anchors[i, 0]
                ry = p[1] - anchors[i, 1]
                rz = p[2] - anchors[i, 2]
                ax = world_axes[i, 0]
                ay = world_axes[i, 1]
                az = world_axes[i, 2]
                jac[0, i] = ay * rz - az * ry
                jac[1, i] = az * rx - ax * rz
                jac[2, i] = ax * ry - ay * rx
                jac[3, i] = ax
                jac[4, i] = ay
                jac[5, i] = az
        gram = np.empty((6, 6))
        for a in range(6):
            for b in range(a, 6):
                acc = 0.0
                for i in range(n):
                    acc += jac[a, i] * jac[b, i]
                gram[a, b] = acc
                gram[b, a] = acc
        for d in range(6):
            gram[d, d] += damping_sq
        y = np.linalg.solve(gram, err)
        dq = np.empty(n)
        for i in range(n):
            acc = 0.0
            for d in range(6):
                acc += jac[d, i] * y[d]
            dq[i] = acc
        step = np.sqrt(np.sum(dq * dq))
        if step > max_step:
            dq *= max_step / step
        q = np.minimum(np.maximum(q + dq, lower), upper)
    return q, False
