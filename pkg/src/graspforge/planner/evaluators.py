"""Grasp scoring: task-direction dexterity and combined quality metrics."""

from __future__ import annotations

import logging

import numpy as np

from ..errors import TaskValidationError
from ..kinematics import jacobian, manipulability
from ..taskmodel import tcp_world_pose
from ..transforms import quat_conjugate, quat_mul, quat_to_rotvec
from .registry import EVALUATOR, default_registry
from .wrench import ContactSet, force_closure_epsilon

logger = logging.getLogger(__name__)

DEFAULT_CHAR_LENGTH = 0.2


def _ellipsoid_radius(jac: np.ndarray, u: np.ndarray) -> float:
    """Velocity-ellipsoid radius along the unit direction u.

    1 / sqrt(u^T (J J^T)^+ u); 0 when u has any component outside the
    Jacobian's range (the direction is not attainable at all).
    """
    gram = jac @ jac.T
    pinv = np.linalg.pinv(gram, rcond=1e-12, hermitian=True)
    y = pinv @ u
    if np.linalg.norm(gram @ y - u) > 1e-8:
        return 0.0
    val = float(u @ y)
    if val <= 1e-16:
        return 0.0
    return 1.0 / np.sqrt(val)


@default_registry.register(EVALUATOR, "capability_index")
class CapabilityIndexEvaluator:
    """Dexterity along the task's step-to-step motion directions.

    For each consecutive step pair the candidate gets the velocity
    ellipsoid radius along the normalized 6D displacement between the two
    TCP poses, evaluated at the step's filtered arm configuration; the
    score is the sum over pairs. Angular displacement is weighted by
    ``char_length`` so meters and radians mix on one scale. Single-step
    tasks fall back to plain manipulability.
    """

    def __init__(self, char_length: float = DEFAULT_CHAR_LENGTH):
        if char_length <= 0.0:
            raise TaskValidationError("char_length must be positive")
        self.char_length = float(char_length)

    def score(self, candidates, task, robot) -> list:
        chain = robot.chain
        steps = task.steps
        scores = []
        for cand in candidates:
            if len(steps) == 1:
                scores.append(manipulability(chain, cand.step_configs[0]))
                continue
            tcp_poses = [tcp_world_pose(s.pose, cand.grasp) for s in steps]
            total = 0.0
            for k in range(len(steps) - 1):
                dp = tcp_poses[k + 1].position - tcp_poses[k].position
                rel = quat_mul(tcp_poses[k + 1].orientation,
                               quat_conjugate(tcp_poses[k].orientation))
                omega = quat_to_rotvec(rel)
                jac = jacobian(chain, cand.step_configs[k])
                if chain.dof < 6:
                    u = dp.copy()
                    jac = jac[:3]
                else:
                    u = np.concatenate([dp, self.char_length * omega])
                norm = np.linalg.norm(u)
                if norm < 1e-12:
                    continue
                total += _ellipsoid_radius(jac, u / norm)
            scores.append(total)
        return scores


@default_registry.register(EVALUATOR, "combined")
class CombinedEvaluator:
    """Weighted blend of wrench quality and average dexterity.

    Both ingredients are normalized by their maximum over the candidate
    batch, so the score compares candidates for one plan rather than
    across objects. Weights must sum to one.
    """

    def __init__(self, w_grasp: float = 0.5, w_kin: float = 0.5,
                 mu: float = 0.5, cone_edges: int = 8):
        if abs(w_grasp + w_kin - 1.0) > 1e-9:
            raise TaskValidationError(
                f"evaluator weights must sum to 1, got {w_grasp} + {w_kin}")
        if w_grasp < 0.0 or w_kin < 0.0:
            raise TaskValidationError("evaluator weights must be non-negative")
        self.w_grasp = float(w_grasp)
        self.w_kin = float(w_kin)
        self.mu = float(mu)
        self.cone_edges = int(cone_edges)

    def score(self, candidates, task, robot) -> list:
        if not candidates:
            return []
        chain = robot.chain
        com = task.obj.mesh.volume_centroid()
        eps_raw = []
        manip_raw = []
        for cand in candidates:
            contacts = cand.grasp.contacts
            if contacts and len(contacts) >= 2:
                cs = ContactSet(
                    points=np.array([c.point for c in contacts]),
                    normals=np.array([-c.normal for c in contacts]),
                    mu=self.mu, com=com)
                eps_raw.append(force_closure_epsilon(cs, self.cone_edges))
            else:
                eps_raw.append(0.0)
            manip_raw.append(float(np.mean(
                [manipulability(chain, cfg) for cfg in cand.step_configs])))
        eps_max = max(eps_raw)
        manip_max = max(manip_raw)
        scores = []
        for e, m in zip(eps_raw, manip_raw):
            e_hat = e / eps_max if eps_max > 0.0 else 0.0
            m_hat = m / manip_max if manip_max > 0.0 else 0.0
            scores.append(self.w_grasp * e_hat + self.w_kin * m_hat)
        return scores
