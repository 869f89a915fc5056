"""Serial-chain kinematics and the end-effector contact model.

Units are meters and radians throughout. Joint configurations travel as
plain ``{joint_name: value}`` dicts at the API surface; internally the
solvers work on vectors ordered like ``chain.joints``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

import numpy as np

from . import _ikcore
from .errors import (IncompleteConfigError, PenetrationError,
                     TaskValidationError)
from .geometry import TriMesh, capsule_distance, point_in_mesh
from .transforms import (Pose, quat_angle, quat_conjugate, quat_from_axis_angle,
                         quat_from_matrix, quat_mul, quat_to_rotvec)

logger = logging.getLogger(__name__)

CONTACT_EPSILON = 1e-4
DEFAULT_POS_TOL = 1e-3
DEFAULT_ROT_TOL = 1e-2
DEFAULT_MAX_RESTARTS = 10
IK_MAX_ITERS = 200
IK_DAMPING = 0.1
IK_MAX_STEP = 0.5
IK_STALL_ITERS = 15
IK_STALL_IMPROVEMENT = 1e-10

REVOLUTE = "revolute"
PRISMATIC = "prismatic"


def _skew(v):
    return np.array([
        [0.0, -v[2], v[1]],
        [v[2], 0.0, -v[0]],
        [-v[1], v[0], 0.0],
    ])


@dataclass
class Joint:
    """One revolute or prismatic joint with a fixed parent offset."""

    name: str
    jtype: str
    origin: Pose = field(default_factory=Pose.identity)
    axis: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, 1.0]))
    limits: tuple = (-np.pi, np.pi)

    def __post_init__(self):
        if self.jtype not in (REVOLUTE, PRISMATIC):
            raise TaskValidationError(
                f"joint '{self.name}': unknown type '{self.jtype}'")
        self.axis = np.asarray(self.axis, dtype=float).reshape(3)
        n = np.linalg.norm(self.axis)
        if n < 1e-12:
            raise TaskValidationError(f"joint '{self.name}': zero axis")
        self.axis = self.axis / n
        lo, hi = float(self.limits[0]), float(self.limits[1])
        if lo > hi:
            raise TaskValidationError(
                f"joint '{self.name}': lower limit {lo} exceeds upper {hi}")
        self.limits = (lo, hi)
        self._origin_m = self.origin.matrix()

    def motion_matrix(self, value: float) -> np.ndarray:
        m = np.eye(4)
        if self.jtype == PRISMATIC:
            m[:3, 3] = self.axis * value
        else:
            k = _skew(self.axis)
            m[:3, :3] += np.sin(value) * k + (1.0 - np.cos(value)) * (k @ k)
        return m


class KinematicChain:
    """Serial chain from a base frame to a tip frame."""

    def __init__(self, joints, base_frame="base", tip_frame="tip", name="chain"):
        self.joints = list(joints)
        self.base_frame = base_frame
        self.tip_frame = tip_frame
        self.name = name
        names = [j.name for j in self.joints]
        if len(set(names)) != len(names):
            raise TaskValidationError(f"chain '{name}': duplicate joint names")
        self.joint_names = names
        self.lower = np.array([j.limits[0] for j in self.joints])
        self.upper = np.array([j.limits[1] for j in self.joints])

    @property
    def dof(self) -> int:
        return len(self.joints)

    def config_to_vector(self, config: dict) -> np.ndarray:
        missing = [n for n in self.joint_names if n not in config]
        if missing:
            raise IncompleteConfigError(
                f"configuration missing joints: {', '.join(missing)}")
        return np.array([float(config[n]) for n in self.joint_names])

    def vector_to_config(self, q) -> dict:
        return {n: float(v) for n, v in zip(self.joint_names, q)}

    def mid_config_vector(self) -> np.ndarray:
        lo = np.where(np.isfinite(self.lower), self.lower, -np.pi)
        hi = np.where(np.isfinite(self.upper), self.upper, np.pi)
        return 0.5 * (lo + hi)

    def frames(self, q):
        """Per-joint world anchor/axis plus the tip matrix, in one pass."""
        q = np.asarray(q, dtype=float)
        t = np.eye(4)
        anchors = np.empty((self.dof, 3))
        axes = np.empty((self.dof, 3))
        for i, joint in enumerate(self.joints):
            t = t @ joint._origin_m
            anchors[i] = t[:3, 3]
            axes[i] = t[:3, :3] @ joint.axis
            t = t @ joint.motion_matrix(q[i])
        return t, anchors, axes

    def fk_matrix(self, q) -> np.ndarray:
        return self.frames(q)[0]

    def packed(self):
        """Chain constants flattened for the compiled descent kernel."""
        if not hasattr(self, "_packed"):
            n = self.dof
            origin_r = np.empty((n, 3, 3))
            origin_t = np.empty((n, 3))
            axes = np.empty((n, 3))
            skew = np.empty((n, 3, 3))
            skew2 = np.empty((n, 3, 3))
            prismatic = np.zeros(n, dtype=np.bool_)
            for i, joint in enumerate(self.joints):
                origin_r[i] = joint._origin_m[:3, :3]
                origin_t[i] = joint._origin_m[:3, 3]
                axes[i] = joint.axis
                k = _skew(joint.axis)
                skew[i] = k
                skew2[i] = k @ k
                prismatic[i] = joint.jtype == PRISMATIC
            self._packed = (origin_r, origin_t, axes, skew, skew2, prismatic,
                            self.lower.astype(float), self.upper.astype(float))
        return self._packed


def forward_kinematics(chain: KinematicChain, config: dict) -> Pose:
    """Tip pose in the base frame."""
    return Pose.from_matrix(chain.fk_matrix(chain.config_to_vector(config)))


def neutral_config(chain: KinematicChain) -> dict:
    """Mid-range joint configuration, the default start pose for tasks."""
    return chain.vector_to_config(chain.mid_config_vector())


def jacobian(chain: KinematicChain, config) -> np.ndarray:
    """Geometric Jacobian (6 x N) of the tip, rows [linear; angular]."""
    q = (chain.config_to_vector(config) if isinstance(config, dict)
         else np.asarray(config, dtype=float))
    tip, anchors, axes = chain.frames(q)
    return _jacobian_from_frames(chain, tip[:3, 3], anchors, axes)


def _jacobian_from_frames(chain, tip_pos, anchors, axes):
    jac = np.zeros((6, chain.dof))
    for i, joint in enumerate(chain.joints):
        if joint.jtype == PRISMATIC:
            jac[:3, i] = axes[i]
        else:
            jac[:3, i] = np.cross(axes[i], tip_pos - anchors[i])
            jac[3:, i] = axes[i]
    return jac


def manipulability(chain: KinematicChain, config) -> float:
    """Volume measure of the velocity ellipsoid at this configuration.

    Chains with six or more joints use the full twist Jacobian. Shorter
    chains use the translational rows only, and below three joints the
    Gram determinant J^T J keeps the product square. Rank-deficient
    configurations give 0.
    """
    q = (chain.config_to_vector(config) if isinstance(config, dict)
         else np.asarray(config, dtype=float))
    jac = jacobian(chain, q)
    if chain.dof < 6:
        jac = jac[:3]
    if jac.shape[1] < jac.shape[0]:
        gram = jac.T @ jac
    else:
        gram = jac @ jac.T
    det = np.linalg.det(gram)
    return float(np.sqrt(det)) if det > 0.0 else 0.0


def _pose_error(target_m, current_m):
    e = np.empty(6)
    e[:3] = target_m[:3, 3] - current_m[:3, 3]
    rel = target_m[:3, :3] @ current_m[:3, :3].T
    e[3:] = quat_to_rotvec(quat_from_matrix(rel))
    return e


def _dls_attempt(chain, target_m, q0, pos_tol, rot_tol, max_iters):
    """One damped-least-squares descent; returns (q, converged)."""
    if _ikcore.HAVE_KERNEL:
        q, ok = _ikcore.dls_descent(
            *chain.packed(),
            np.ascontiguousarray(target_m[:3, :3]), target_m[:3, 3].copy(),
            np.asarray(q0, dtype=float), pos_tol, rot_tol, max_iters,
            IK_DAMPING ** 2, IK_MAX_STEP, IK_STALL_ITERS,
            IK_STALL_IMPROVEMENT)
        return q, bool(ok)
    q = np.clip(q0, chain.lower, chain.upper)
    damping_sq = IK_DAMPING ** 2
    eye6 = np.eye(6)
    best = np.inf
    stall = 0
    for _ in range(max_iters):
        tip, anchors, axes = chain.frames(q)
        err = _pose_error(target_m, tip)
        pos_err = np.linalg.norm(err[:3])
        rot_err = np.linalg.norm(err[3:])
        if pos_err <= pos_tol and rot_err <= rot_tol:
            return q, True
        total = pos_err + rot_err
        if total < best - IK_STALL_IMPROVEMENT:
            best = total
            stall = 0
        else:
            stall += 1
            if stall >= IK_STALL_ITERS:
                return q, False
        jac = _jacobian_from_frames(chain, tip[:3, 3], anchors, axes)
        dq = jac.T @ np.linalg.solve(jac @ jac.T + damping_sq * eye6, err)
        step = np.linalg.norm(dq)
        if step > IK_MAX_STEP:
            dq *= IK_MAX_STEP / step
        q = np.clip(q + dq, chain.lower, chain.upper)
    return q, False


def solve_ik(chain: KinematicChain, target: Pose, seed: dict | None = None, *,
             pos_tol: float = DEFAULT_POS_TOL, rot_tol: float = DEFAULT_ROT_TOL,
             max_restarts: int = DEFAULT_MAX_RESTARTS, rng_seed: int = 0,
             max_iters: int = IK_MAX_ITERS) -> dict | None:
    """Damped-least-squares IK with seeded random restarts.

    Returns a joint configuration whose FK is within the tolerances, or
    None when every attempt failed. Failure is an expected outcome here,
    not an exception: callers routinely probe unreachable poses.
    """
    target_m = target.matrix()
    if seed is not None:
        q0 = np.clip(chain.config_to_vector(seed), chain.lower, chain.upper)
    else:
        q0 = chain.mid_config_vector()
    q, ok = _dls_attempt(chain, target_m, q0, pos_tol, rot_tol, max_iters)
    if ok:
        return chain.vector_to_config(q)
    if max_restarts > 0:
        rng = np.random.default_rng(rng_seed)
        lo = np.where(np.isfinite(chain.lower), chain.lower, -np.pi)
        hi = np.where(np.isfinite(chain.upper), chain.upper, np.pi)
        for _ in range(max_restarts):
            q0 = lo + rng.random(chain.dof) * (hi - lo)
            q, ok = _dls_attempt(chain, target_m, q0, pos_tol, rot_tol, max_iters)
            if ok:
                return chain.vector_to_config(q)
    return None


STATUS_EXACT = "exact"
STATUS_TOLERANCE = "tolerance_only"


def _tolerance_corners(tol_pos):
    axes = [(-t, t) if t > 0.0 else (0.0,) for t in tol_pos]
    corners = [c for c in product(*axes) if any(v != 0.0 for v in c)]
    return [np.array(c) for c in corners]


def _intrinsic_xyz_quat(rx, ry, rz):
    qx = quat_from_axis_angle([1.0, 0.0, 0.0], rx)
    qy = quat_from_axis_angle([0.0, 1.0, 0.0], ry)
    qz = quat_from_axis_angle([0.0, 0.0, 1.0], rz)
    return quat_mul(qx, quat_mul(qy, qz))


def solve_ik_toleranced(chain: KinematicChain, step, grasp_offset: Pose,
                        seed: dict | None = None, *,
                        pos_tol: float = DEFAULT_POS_TOL,
                        rot_tol: float = DEFAULT_ROT_TOL,
                        max_restarts: int = DEFAULT_MAX_RESTARTS,
                        sample_restarts: int = 2, n_samples: int = 16,
                        rng_seed: int = 0):
    """IK against a task step, exploiting its pose tolerance box.

    ``step`` provides ``pose``, ``tol_pos`` and ``tol_rot``; the tolerance
    offsets perturb the step pose in its own frame before the grasp offset
    is applied. The nominal pose is tried first, then the corners of the
    position box, then ``n_samples`` seeded random draws from the full
    position-by-rotation box. Returns ``(config, status)`` with status
    ``"exact"`` or ``"tolerance_only"``, or None.
    """
    tol_pos = np.asarray(step.tol_pos, dtype=float)
    tol_rot = np.asarray(step.tol_rot, dtype=float)
    if np.any(tol_pos < 0.0) or np.any(tol_rot < 0.0):
        raise TaskValidationError("step tolerances must be non-negative")

    nominal = step.pose.compose(grasp_offset)
    cfg = solve_ik(chain, nominal, seed, pos_tol=pos_tol, rot_tol=rot_tol,
                   max_restarts=max_restarts, rng_seed=rng_seed)
    if cfg is not None:
        return cfg, STATUS_EXACT

    attempt = 1
    for corner in _tolerance_corners(tol_pos):
        target = step.pose.compose(Pose(corner)).compose(grasp_offset)
        cfg = solve_ik(chain, target, seed, pos_tol=pos_tol, rot_tol=rot_tol,
                       max_restarts=sample_restarts, rng_seed=rng_seed + attempt)
        if cfg is not None:
            return cfg, STATUS_TOLERANCE
        attempt += 1

    if np.any(tol_pos > 0.0) or np.any(tol_rot > 0.0):
        rng = np.random.default_rng(rng_seed)
        for _ in range(n_samples):
            dp = rng.uniform(-tol_pos, tol_pos)
            rx, ry, rz = rng.uniform(-tol_rot, tol_rot)
            disturb = Pose(dp, _intrinsic_xyz_quat(rx, ry, rz))
            target = step.pose.compose(disturb).compose(grasp_offset)
            cfg = solve_ik(chain, target, seed, pos_tol=pos_tol,
                           rot_tol=rot_tol, max_restarts=sample_restarts,
                           rng_seed=rng_seed + attempt)
            if cfg is not None:
                return cfg, STATUS_TOLERANCE
            attempt += 1
    return None


# ---------------------------------------------------------------------------
# End effector model and finger closing


@dataclass
class Capsule:
    """Sphere-swept segment in its owning link's frame."""

    p0: np.ndarray
    p1: np.ndarray
    radius: float

    def __post_init__(self):
        self.p0 = np.asarray(self.p0, dtype=float).reshape(3)
        self.p1 = np.asarray(self.p1, dtype=float).reshape(3)
        self.radius = float(self.radius)
        if self.radius <= 0.0:
            raise TaskValidationError("capsule radius must be positive")


@dataclass
class FingerChain:
    """One finger: serial joints from the palm, one contact capsule per link."""

    joints: list
    open_config: np.ndarray
    closed_config: np.ndarray
    links: list

    def __post_init__(self):
        self.open_config = np.asarray(self.open_config, dtype=float)
        self.closed_config = np.asarray(self.closed_config, dtype=float)
        n = len(self.joints)
        if len(self.open_config) != n or len(self.closed_config) != n:
            raise TaskValidationError(
                "finger open/closed configs must match joint count")
        if len(self.links) != n:
            raise TaskValidationError("finger needs one link capsule per joint")
        for j, lo_val, hi_val in zip(self.joints, self.open_config,
                                     self.closed_config):
            lo, hi = j.limits
            for v in (lo_val, hi_val):
                if v < lo - 1e-9 or v > hi + 1e-9:
                    raise TaskValidationError(
                        f"finger joint '{j.name}': open/closed value {v} "
                        f"outside limits [{lo}, {hi}]")

    def link_capsules_world(self, values, palm_m):
        """World-frame capsule endpoints for every link at these values."""
        t = palm_m
        out = []
        for joint, value, cap in zip(self.joints, values, self.links):
            t = t @ joint._origin_m @ joint.motion_matrix(value)
            p0 = t[:3, :3] @ cap.p0 + t[:3, 3]
            p1 = t[:3, :3] @ cap.p1 + t[:3, 3]
            out.append((p0, p1, cap.radius))
        return out


@dataclass
class EndEffectorModel:
    """Hand description: palm mount, TCP offset, fingers, palm collision."""

    name: str
    palm_frame: str
    tcp_offset: Pose
    fingers: list
    palm: list = field(default_factory=list)

    def joint_names(self):
        return [j.name for f in self.fingers for j in f.joints]

    def open_config(self) -> dict:
        return {j.name: float(v) for f in self.fingers
                for j, v in zip(f.joints, f.open_config)}

    def parallel_gap(self) -> float:
        """Widest object a two-finger parallel hand can admit.

        Distance between the two fingertip capsule axes at the open config
        minus both capsule radii. Raises unless the hand has exactly two
        single-joint prismatic fingers.
        """
        if len(self.fingers) != 2 or any(
                len(f.joints) != 1 or f.joints[0].jtype != PRISMATIC
                for f in self.fingers):
            raise TaskValidationError(
                f"end effector '{self.name}' is not a two-finger parallel hand")
        eye = np.eye(4)
        caps = [f.link_capsules_world(f.open_config, eye)[0]
                for f in self.fingers]
        mid = [0.5 * (c[0] + c[1]) for c in caps]
        return float(np.linalg.norm(mid[0] - mid[1]) - caps[0][2] - caps[1][2])

    def closing_axis(self) -> np.ndarray:
        """Unit axis (palm frame) along which a parallel hand's fingers travel."""
        if len(self.fingers) != 2:
            raise TaskValidationError(
                f"end effector '{self.name}' is not a two-finger hand")
        return self.fingers[0].joints[0].axis.copy()


@dataclass
class Contact:
    """Contact produced by finger closing, in the object's frame."""

    point: np.ndarray
    normal: np.ndarray
    link: str


def _finger_step_sizes(finger, step_size):
    if step_size is not None:
        return np.full(len(finger.joints), float(step_size))
    return np.array([0.001 if j.jtype == PRISMATIC else 0.01
                     for j in finger.joints])


def _link_clearances(finger, values, palm_m, mesh, moved):
    """Clearance, mesh point, and push-back normal per moved link."""
    caps = finger.link_capsules_world(values, palm_m)
    out = {}
    for i in moved:
        p0, p1, radius = caps[i]
        dist, mesh_pt, seg_pt, face = capsule_distance(mesh, p0, p1)
        if dist > 1e-9:
            normal = (seg_pt - mesh_pt) / dist
        else:
            normal = mesh.face_normals[face].copy()
        out[i] = (dist - radius, mesh_pt, normal)
    return out


def close_fingers(ee: EndEffectorModel, palm_pose: Pose, mesh: TriMesh, *,
                  step_size: float | None = None,
                  contact_epsilon: float = CONTACT_EPSILON):
    """Drive the fingers from open toward closed until they touch the mesh.

    The palm stays fixed at ``palm_pose`` (expressed in the mesh frame).
    Joints advance in small increments; when a link's capsule reaches the
    contact band the increment is bisected so the final clearance lies
    within ``contact_epsilon`` of touching, then that link and everything
    proximal to it stops. Distal joints keep closing.

    Returns ``(finger_config, contacts)``. Raises PenetrationError when the
    palm or a finger link already penetrates the object at the open config.
    """
    palm_m = palm_pose.matrix()

    for cap in ee.palm:
        p0 = palm_m[:3, :3] @ cap.p0 + palm_m[:3, 3]
        p1 = palm_m[:3, :3] @ cap.p1 + palm_m[:3, 3]
        dist, _, _, _ = capsule_distance(mesh, p0, p1)
        # A capsule buried entirely inside the object never crosses a face,
        # so the surface distance alone cannot flag it; the parity test does.
        if dist - cap.radius < -contact_epsilon or point_in_mesh(mesh, p0):
            raise PenetrationError("palm penetrates the object at the open pose")

    config = {}
    contacts = []
    for fi, finger in enumerate(ee.fingers):
        n = len(finger.joints)
        values = finger.open_config.copy()
        moved = list(range(n))
        caps0 = finger.link_capsules_world(values, palm_m)
        start = _link_clearances(finger, values, palm_m, mesh, moved)
        for i, (clearance, _, _) in start.items():
            if clearance < -contact_epsilon or point_in_mesh(mesh, caps0[i][0]):
                raise PenetrationError(
                    f"finger {fi} link {i} penetrates the object at the open pose")

        frozen = np.zeros(n, dtype=bool)
        steps = _finger_step_sizes(finger, step_size)
        in_contact = np.zeros(n, dtype=bool)
        for i, (clearance, mesh_pt, normal) in start.items():
            if clearance <= contact_epsilon:
                contacts.append(Contact(mesh_pt, normal, f"finger{fi}/link{i}"))
                in_contact[i] = True
                frozen[: i + 1] = True

        while True:
            active = [i for i in range(n) if not frozen[i]
                      and abs(values[i] - finger.closed_config[i]) > 1e-12]
            if not active:
                break
            prev = values.copy()
            for i in active:
                delta = finger.closed_config[i] - values[i]
                values[i] += np.sign(delta) * min(abs(delta), steps[i])
            moved = [i for i in range(n) if i >= min(active)]
            moved = [i for i in moved if not in_contact[i]]
            info = _link_clearances(finger, values, palm_m, mesh, moved)
            min_clear = min((c for c, _, _ in info.values()), default=np.inf)
            if min_clear < -contact_epsilon:
                lo_s, hi_s = 0.0, 1.0
                for _ in range(60):
                    mid = 0.5 * (lo_s + hi_s)
                    trial = prev + mid * (values - prev)
                    info = _link_clearances(finger, trial, palm_m, mesh, moved)
                    min_clear = min(c for c, _, _ in info.values())
                    if min_clear < -contact_epsilon:
                        hi_s = mid
                    elif min_clear > contact_epsilon:
                        lo_s = mid
                    else:
                        break
                values = prev + 0.5 * (lo_s + hi_s) * (values - prev)
                info = _link_clearances(finger, values, palm_m, mesh, moved)
            for i in sorted(info):
                clearance, mesh_pt, normal = info[i]
                if clearance <= contact_epsilon and not in_contact[i]:
                    contacts.append(
                        Contact(mesh_pt, normal, f"finger{fi}/link{i}"))
                    in_contact[i] = True
                    frozen[: i + 1] = True
        config.update({j.name: float(v)
                       for j, v in zip(finger.joints, values)})
    return config, contacts


# ---------------------------------------------------------------------------
# Robot description documents


@dataclass
class RobotModel:
    """An arm chain plus the end effectors that can mount on its tip."""

    name: str
    chain: KinematicChain
    end_effectors: dict

    def end_effector(self, name: str) -> EndEffectorModel:
        if name not in self.end_effectors:
            known = ", ".join(sorted(self.end_effectors)) or "none"
            raise TaskValidationError(
                f"unknown end effector '{name}' (available: {known})")
        return self.end_effectors[name]

    def tcp_pose(self, config: dict, ee_name: str) -> Pose:
        ee = self.end_effector(ee_name)
        return forward_kinematics(self.chain, config).compose(ee.tcp_offset)

    def flange_offset(self, ee_name: str) -> Pose:
        """Transform multiplied onto a TCP target to get the chain tip target."""
        return self.end_effector(ee_name).tcp_offset.inverse()


def _parse_joint(doc: dict, where: str) -> Joint:
    for key in ("name", "type", "axis"):
        if key not in doc:
            raise TaskValidationError(f"{where}: joint missing '{key}'")
    limits = doc.get("limits")
    if limits is None or len(limits) != 2:
        raise TaskValidationError(
            f"{where}: joint '{doc['name']}' needs limits [lo, hi]")
    return Joint(
        name=doc["name"],
        jtype=doc["type"],
        origin=Pose.from_dict(doc.get("origin", {})),
        axis=doc["axis"],
        limits=(float(limits[0]), float(limits[1])),
    )


def _parse_capsule(doc: dict, where: str) -> Capsule:
    seg = doc.get("segment")
    if seg is None or len(seg) != 2:
        raise TaskValidationError(f"{where}: capsule needs segment [[p0], [p1]]")
    if "radius" not in doc:
        raise TaskValidationError(f"{where}: capsule needs a radius")
    return Capsule(seg[0], seg[1], doc["radius"])


def _parse_end_effector(doc: dict) -> EndEffectorModel:
    name = doc.get("name")
    if not name:
        raise TaskValidationError("end effector missing 'name'")
    where = f"end effector '{name}'"
    fingers = []
    for k, fdoc in enumerate(doc.get("fingers", [])):
        joints = [_parse_joint(j, f"{where} finger {k}")
                  for j in fdoc.get("joints", [])]
        if not joints:
            raise TaskValidationError(f"{where} finger {k}: no joints")
        links = [_parse_capsule(c, f"{where} finger {k}")
                 for c in fdoc.get("links", [])]
        fingers.append(FingerChain(joints, fdoc.get("open", []),
                                   fdoc.get("closed", []), links))
    all_names = [j.name for f in fingers for j in f.joints]
    if len(set(all_names)) != len(all_names):
        raise TaskValidationError(f"{where}: duplicate finger joint names")
    palm = [_parse_capsule(c, where) for c in doc.get("palm", [])]
    return EndEffectorModel(
        name=name,
        palm_frame=doc.get("palm_frame", "palm"),
        tcp_offset=Pose.from_dict(doc.get("tcp_offset", {})),
        fingers=fingers,
        palm=palm,
    )


def load_robot(source) -> RobotModel:
    """Build a RobotModel from a JSON document, path, or parsed dict."""
    import json

    if isinstance(source, (str, Path)):
        try:
            with open(source) as fh:
                doc = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise TaskValidationError(
                f"cannot read robot description {source}: {exc}") from exc
    else:
        doc = source
    if not isinstance(doc, dict):
        raise TaskValidationError("robot description must be a JSON object")
    if "joints" not in doc or not doc["joints"]:
        raise TaskValidationError("robot description has no joints")
    joints = [_parse_joint(j, "robot") for j in doc["joints"]]
    chain = KinematicChain(
        joints,
        base_frame=doc.get("base_frame", "base"),
        tip_frame=doc.get("tip_frame", "tool"),
        name=doc.get("name", "robot"),
    )
    effectors = {}
    for edoc in doc.get("end_effectors", []):
        ee = _parse_end_effector(edoc)
        effectors[ee.name] = ee
    return RobotModel(name=doc.get("name", "robot"), chain=chain,
                      end_effectors=effectors)
