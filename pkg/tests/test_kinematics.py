"""Chain FK/IK, Jacobians, finger closing and robot descriptions.

The planar two-link chain from conftest has closed-form kinematics, so
its tests pin exact numbers. The six-joint arm is checked against an
independently composed FK (scipy rotations) and finite differences.
"""

from __future__ import annotations

import numpy as np
import pytest
from scipy.spatial.transform import Rotation

from graspforge import kinematics as kin
from graspforge.errors import (
    IncompleteConfigError,
    PenetrationError,
    TaskValidationError,
)
from graspforge.geometry import box_mesh, icosphere_mesh
from graspforge.kinematics import (
    Capsule,
    EndEffectorModel,
    FingerChain,
    Joint,
    KinematicChain,
    close_fingers,
    forward_kinematics,
    jacobian,
    load_robot,
    manipulability,
    neutral_config,
    solve_ik,
    solve_ik_toleranced,
)
from graspforge.taskmodel import TolerancedStep
from graspforge.transforms import (
    Pose,
    quat_angle_between,
    quat_from_axis_angle,
    quat_from_matrix,
    quat_to_rotvec,
)

from conftest import make_planar_chain, planar_config
from _oracles import planar_2r_ik


# ---------------------------------------------------------------------------
# joints and chain plumbing


def test_joint_validation():
    with pytest.raises(TaskValidationError):
        Joint("a", "helical", Pose(), [0, 0, 1], (-1.0, 1.0))
    with pytest.raises(TaskValidationError):
        Joint("a", "revolute", Pose(), [0, 0, 0], (-1.0, 1.0))
    with pytest.raises(TaskValidationError):
        Joint("a", "revolute", Pose(), [0, 0, 1], (2.0, -2.0))


def test_joint_axis_normalized():
    j = Joint("a", "revolute", Pose(), [0.0, 0.0, 2.0], (-1.0, 1.0))
    assert np.allclose(j.axis, [0.0, 0.0, 1.0])


def test_duplicate_joint_names_rejected():
    joints = [Joint("a", "revolute", Pose(), [0, 0, 1], (-1, 1)),
              Joint("a", "revolute", Pose(), [0, 0, 1], (-1, 1))]
    with pytest.raises(TaskValidationError):
        KinematicChain(joints)


def test_incomplete_config():
    chain = make_planar_chain()
    with pytest.raises(IncompleteConfigError) as info:
        forward_kinematics(chain, {"shoulder": 0.0})
    msg = str(info.value)
    assert "elbow" in msg and "mount" in msg


def test_neutral_config_is_mid_range(chain):
    cfg = neutral_config(chain)
    for joint in chain.joints:
        lo, hi = joint.limits
        assert cfg[joint.name] == pytest.approx(0.5 * (lo + hi))
        assert lo <= cfg[joint.name] <= hi


# ---------------------------------------------------------------------------
# forward kinematics


def test_planar_fk_known_poses(planar):
    fk = forward_kinematics(planar, planar_config(np.pi / 2, 0.0))
    assert np.allclose(fk.position, [0.0, 2.0, 0.0], atol=1e-12)
    assert quat_angle_between(
        fk.orientation, quat_from_axis_angle([0, 0, 1], np.pi / 2)) < 1e-12

    fk = forward_kinematics(planar, planar_config(np.pi / 2, -np.pi / 2))
    assert np.allclose(fk.position, [1.0, 1.0, 0.0], atol=1e-12)
    assert quat_angle_between(fk.orientation, np.array([0, 0, 0, 1.0])) < 1e-12


def test_all_zero_fk_of_identity_chain():
    joints = [Joint("a", "revolute", Pose(), [0, 0, 1], (-1, 1)),
              Joint("b", "revolute", Pose(), [0, 1, 0], (-1, 1))]
    chain = KinematicChain(joints)
    fk = forward_kinematics(chain, {"a": 0.0, "b": 0.0})
    assert np.allclose(fk.position, 0.0, atol=1e-15)
    assert quat_angle_between(fk.orientation, np.array([0, 0, 0, 1.0])) == 0.0


def _scipy_fk(robot_doc_joints, tcp_xyz, config):
    """Compose the arm transform joint by joint with scipy rotations."""
    pos = np.zeros(3)
    rot = Rotation.identity()
    for jdoc in robot_doc_joints:
        pos = pos + rot.apply(jdoc["origin"]["xyz"])
        axis = np.asarray(jdoc["axis"], dtype=float)
        axis = axis / np.linalg.norm(axis)
        q = config[jdoc["name"]]
        if jdoc["type"] == "revolute":
            rot = rot * Rotation.from_rotvec(axis * q)
        else:
            pos = pos + rot.apply(axis * q)
    return pos + rot.apply(tcp_xyz), rot


def test_arm_fk_matches_independent_composition(arm, fixture_dir):
    import json
    doc = json.loads((fixture_dir / "robot_arm6.json").read_text())
    rng = np.random.default_rng(21)
    lo = arm.chain.lower
    hi = arm.chain.upper
    for _ in range(10):
        q = lo + rng.random(arm.chain.dof) * (hi - lo)
        cfg = arm.chain.vector_to_config(q)
        want_pos, want_rot = _scipy_fk(doc["joints"], [0.0, 0.0, 0.0], cfg)
        fk = forward_kinematics(arm.chain, cfg)
        assert np.allclose(fk.position, want_pos, atol=1e-10)
        got = Rotation.from_matrix(fk.matrix()[:3, :3])
        assert (got.inv() * want_rot).magnitude() < 1e-10


def test_tcp_pose_appends_tool_offset(arm, start_config):
    flange = forward_kinematics(arm.chain, start_config)
    tcp = arm.tcp_pose(start_config, "parallel")
    want = flange.compose(Pose([0.0, 0.0, 0.10]))
    assert np.allclose(tcp.position, want.position, atol=1e-12)
    assert quat_angle_between(tcp.orientation, want.orientation) < 1e-12


# ---------------------------------------------------------------------------
# jacobian


def _fd_jacobian(chain, q, h=1e-6):
    jac = np.zeros((6, chain.dof))
    for i in range(chain.dof):
        qp = q.copy()
        qm = q.copy()
        qp[i] += h
        qm[i] -= h
        tp = chain.fk_matrix(qp)
        tm = chain.fk_matrix(qm)
        jac[:3, i] = (tp[:3, 3] - tm[:3, 3]) / (2 * h)
        rel = tp[:3, :3] @ tm[:3, :3].T
        jac[3:, i] = quat_to_rotvec(quat_from_matrix(rel)) / (2 * h)
    return jac


def test_jacobian_matches_finite_differences(chain):
    rng = np.random.default_rng(7)
    lo = np.maximum(chain.lower, -2.0)
    hi = np.minimum(chain.upper, 2.0)
    for _ in range(5):
        q = lo + rng.random(chain.dof) * (hi - lo)
        assert np.abs(jacobian(chain, q) - _fd_jacobian(chain, q)).max() < 1e-5


def test_planar_jacobian_columns(planar):
    jac = jacobian(planar, planar_config(0.0, 0.0))
    # shoulder sweeps the full two-link reach
    assert np.allclose(jac[:, 0], [0, 2, 0, 0, 0, 1], atol=1e-12)
    assert np.allclose(jac[:, 1], [0, 1, 0, 0, 0, 1], atol=1e-12)
    # locked prismatic mount: pure translation along z
    assert np.allclose(jac[:, 2], [0, 0, 1, 0, 0, 0], atol=1e-12)

    jac = jacobian(planar, planar_config(0.3, -0.7))
    assert np.allclose(jac[3:, 2], 0.0, atol=1e-15)


def test_jacobian_accepts_dict_and_vector(planar):
    a = jacobian(planar, planar_config(0.4, 0.2))
    b = jacobian(planar, np.array([0.4, 0.2, 0.0]))
    assert np.array_equal(a, b)


# ---------------------------------------------------------------------------
# manipulability


def test_planar_manipulability_values(planar):
    assert manipulability(planar, planar_config(0.0, np.pi / 2)) == \
        pytest.approx(1.0, abs=1e-9)
    # stretched out: straight-line singularity
    assert manipulability(planar, planar_config(0.0, 0.0)) == 0.0
    # rotated singular pose: rounding leaves a speck of determinant
    assert manipulability(planar, planar_config(1.1, 0.0)) < 1e-6


def test_manipulability_nonnegative(planar):
    rng = np.random.default_rng(2)
    for _ in range(30):
        q1, q2 = rng.uniform(-np.pi, np.pi, size=2)
        assert manipulability(planar, planar_config(q1, q2)) >= 0.0


def test_manipulability_gram_branch():
    # two joints: fewer columns than translational rows exercises J^T J
    joints = [
        Joint("spin", "revolute", Pose(), [0.0, 0.0, 1.0], (-np.pi, np.pi)),
        Joint("slide", "prismatic", Pose([1.0, 0.0, 0.0]), [1.0, 0.0, 0.0],
              (0.0, 2.0)),
    ]
    chain = KinematicChain(joints)
    for ext in (0.0, 0.5, 1.25):
        got = manipulability(chain, {"spin": 0.3, "slide": ext})
        assert got == pytest.approx(1.0 + ext, abs=1e-9)


def test_arm_manipulability_at_start(arm, start_config):
    assert manipulability(arm.chain, start_config) > 1e-4


# ---------------------------------------------------------------------------
# inverse kinematics


def test_ik_recovers_fk_target(chain, start_config):
    target = forward_kinematics(chain, start_config)
    cfg = solve_ik(chain, target, start_config, max_restarts=0)
    assert cfg is not None
    fk = forward_kinematics(chain, cfg)
    assert np.linalg.norm(np.asarray(fk.position) - target.position) < 1e-3
    assert quat_angle_between(fk.orientation, target.orientation) < 1e-2


def test_ik_agrees_with_planar_closed_form(planar):
    target_xy = (0.5, 0.5)
    branches = planar_2r_ik(target_xy)
    assert len(branches) == 2
    for q1, q2 in branches:
        # the oracle must itself be consistent before it judges the solver
        fk = forward_kinematics(planar, planar_config(q1, q2))
        assert np.allclose(fk.position[:2], target_xy, atol=1e-9)

        target = Pose([target_xy[0], target_xy[1], 0.0],
                      quat_from_axis_angle([0, 0, 1], q1 + q2))
        cfg = solve_ik(planar, target, rng_seed=3)
        assert cfg is not None
        # orientation pins the elbow branch, so the solver must land on it
        assert cfg["shoulder"] == pytest.approx(q1, abs=5e-3)
        assert cfg["elbow"] == pytest.approx(q2, abs=5e-3)
        assert cfg["mount"] == 0.0


def test_ik_unreachable_returns_none(planar):
    target = Pose([3.0, 0.0, 0.0], np.array([0, 0, 0, 1.0]))
    assert solve_ik(planar, target, rng_seed=1) is None


def test_ik_respects_limits(chain):
    rng = np.random.default_rng(13)
    lo = chain.lower
    hi = chain.upper
    for _ in range(5):
        q = lo + rng.random(chain.dof) * (hi - lo)
        target = Pose.from_matrix(chain.fk_matrix(q))
        cfg = solve_ik(chain, target, rng_seed=5)
        if cfg is None:
            continue
        vec = chain.config_to_vector(cfg)
        assert np.all(vec >= lo - 1e-12)
        assert np.all(vec <= hi + 1e-12)


def test_ik_deterministic_per_seed(chain, start_config):
    target = Pose([0.45, 0.1, 0.5],
                  quat_from_axis_angle([0, 1, 0], np.pi / 2))
    a = solve_ik(chain, target, start_config, rng_seed=9)
    b = solve_ik(chain, target, start_config, rng_seed=9)
    assert a is not None and b is not None
    assert a == b


def test_kernel_and_fallback_agree(chain, start_config, monkeypatch):
    """The compiled descent and the numpy fallback are one contract.

    Floating-point op order differs between them, so this checks agreement
    in outcome (success and pose accuracy), not bitwise equality.
    """
    from graspforge import _ikcore

    rng = np.random.default_rng(31)
    lo = chain.lower
    hi = chain.upper
    targets = []
    seeds = []
    for _ in range(12):
        q = lo + rng.random(chain.dof) * (hi - lo)
        targets.append(Pose.from_matrix(chain.fk_matrix(q)))
        seeds.append(chain.vector_to_config(
            np.clip(q + rng.normal(scale=0.1, size=chain.dof), lo, hi)))

    def run():
        out = []
        for target, seed in zip(targets, seeds):
            cfg = solve_ik(chain, target, seed, max_restarts=2, rng_seed=4)
            if cfg is None:
                out.append(None)
                continue
            fk = forward_kinematics(chain, cfg)
            err = np.linalg.norm(np.asarray(fk.position) - target.position)
            assert err < 1e-3
            out.append(True)
        return out

    with_kernel = run()
    monkeypatch.setattr(_ikcore, "HAVE_KERNEL", False)
    without = run()
    assert with_kernel == without
    assert any(r is True for r in with_kernel)


# ---------------------------------------------------------------------------
# toleranced IK


def test_toleranced_exact_when_reachable(arm, start_config):
    tcp = arm.tcp_pose(start_config, "parallel")
    step = TolerancedStep(tcp, [0.01, 0.01, 0.01], [0.1, 0.1, 0.1])
    res = solve_ik_toleranced(arm.chain, step, arm.flange_offset("parallel"),
                              start_config, rng_seed=2)
    assert res is not None
    cfg, status = res
    assert status == "exact"
    sol_tcp = arm.tcp_pose(cfg, "parallel")
    assert np.linalg.norm(
        np.asarray(sol_tcp.position) - tcp.position) < 1e-3


def test_toleranced_rejects_negative_tolerance(arm, boundary):
    step = TolerancedStep.__new__(TolerancedStep)
    step.pose = boundary["nominal"]
    step.tol_pos = np.array([-0.01, 0.0, 0.0])
    step.tol_rot = np.zeros(3)
    with pytest.raises(TaskValidationError):
        solve_ik_toleranced(arm.chain, step, boundary["offset"],
                            boundary["seed"])


def test_boundary_pose_needs_tolerance(arm, boundary):
    """1 cm past the workspace shell: hopeless at zero tolerance."""
    step = TolerancedStep(boundary["nominal"], np.zeros(3), np.zeros(3))
    res = solve_ik_toleranced(arm.chain, step, boundary["offset"],
                              boundary["seed"], rng_seed=5)
    assert res is None


def test_boundary_pose_reachable_with_tolerance(arm, boundary):
    nominal = boundary["nominal"]
    step = TolerancedStep(nominal, [0.02, 0.02, 0.02], np.zeros(3))
    res = solve_ik_toleranced(arm.chain, step, boundary["offset"],
                              boundary["seed"], rng_seed=5)
    assert res is not None
    cfg, status = res
    assert status == "tolerance_only"
    # the realized pose sits inside the tolerance box around the nominal
    sol_tcp = arm.tcp_pose(cfg, "parallel")
    delta = nominal.inverse().compose(sol_tcp)
    assert np.all(np.abs(delta.position) <= 0.02 + 1e-3 + 1e-6)
    assert quat_angle_between(sol_tcp.orientation, nominal.orientation) < 0.011


def test_boundary_tolerance_too_small_still_fails(arm, boundary):
    step = TolerancedStep(boundary["nominal"], [0.005, 0.005, 0.005],
                          np.zeros(3))
    res = solve_ik_toleranced(arm.chain, step, boundary["offset"],
                              boundary["seed"], rng_seed=5)
    assert res is None


# ---------------------------------------------------------------------------
# finger closing


def test_fingers_close_fully_on_nothing(parallel_ee):
    mesh = box_mesh([0.04, 0.04, 0.04])
    palm = Pose([1.0, 1.0, 1.0])
    config, contacts = close_fingers(parallel_ee, palm, mesh)
    assert contacts == []
    assert config["finger_l"] == pytest.approx(0.0, abs=1e-12)
    assert config["finger_r"] == pytest.approx(0.0, abs=1e-12)


def test_fingers_pinch_cube(parallel_ee, cube4):
    # palm faces +z so the finger capsules straddle the cube's y faces
    palm = Pose([0.0, 0.0, -0.075])
    config, contacts = close_fingers(parallel_ee, palm, cube4)
    assert len(contacts) == 2
    normals = {c.link: c.normal for c in contacts}
    dot = float(np.dot(normals["finger0/link0"], normals["finger1/link0"]))
    assert dot < -0.99
    for c in contacts:
        # contact point on the cube's surface
        assert np.max(np.abs(c.point)) <= 0.02 + 1e-9
        assert abs(abs(c.point[1]) - 0.02) < 1e-9
    # both fingers stop at face distance plus the capsule radius
    for name in ("finger_l", "finger_r"):
        assert config[name] == pytest.approx(0.028, abs=2e-4)


def test_palm_penetration_raises(parallel_ee):
    tall = box_mesh([0.04, 0.04, 0.30])
    with pytest.raises(PenetrationError, match="palm"):
        close_fingers(parallel_ee, Pose([0.0, 0.0, -0.075]), tall)


def test_finger_penetration_raises(parallel_ee):
    ball = icosphere_mesh(0.025, subdivisions=3).transformed(
        Pose([0.0, 0.04, 0.09]))
    with pytest.raises(PenetrationError, match="finger"):
        close_fingers(parallel_ee, Pose(), ball)


def test_deep_containment_detected(parallel_ee):
    # a big hollow region: every capsule is inside, none crosses a face
    ball = icosphere_mesh(0.5, subdivisions=2)
    with pytest.raises(PenetrationError):
        close_fingers(parallel_ee, Pose(), ball)


def test_contacts_lie_in_contact_band(parallel_ee, cube4):
    from graspforge.geometry import closest_point
    palm = Pose([0.0, 0.0, -0.075])
    _, contacts = close_fingers(parallel_ee, palm, cube4)
    for c in contacts:
        _, dist, _ = closest_point(cube4, c.point)
        assert dist < 1e-6
        assert np.linalg.norm(c.normal) == pytest.approx(1.0, abs=1e-9)


# ---------------------------------------------------------------------------
# end-effector model


def test_parallel_gap_value(parallel_ee):
    assert parallel_ee.parallel_gap() == pytest.approx(0.064, abs=1e-12)


def test_closing_axis(parallel_ee):
    assert np.allclose(parallel_ee.closing_axis(), [0.0, 1.0, 0.0])


def test_open_config_and_joint_names(parallel_ee):
    assert parallel_ee.joint_names() == ["finger_l", "finger_r"]
    assert parallel_ee.open_config() == {"finger_l": 0.04, "finger_r": 0.04}


def _one_finger_hand():
    finger = FingerChain(
        joints=[Joint("f", "prismatic", Pose(), [0, 1, 0], (0.0, 0.05))],
        open_config=[0.04], closed_config=[0.0],
        links=[Capsule([0, 0, 0.05], [0, 0, 0.1], 0.008)])
    return EndEffectorModel(name="hook", palm_frame="flange",
                            tcp_offset=Pose(), fingers=[finger], palm=[])


def test_parallel_gap_requires_two_prismatic_fingers():
    with pytest.raises(TaskValidationError):
        _one_finger_hand().parallel_gap()


def test_finger_chain_validation():
    with pytest.raises(TaskValidationError):
        FingerChain(
            joints=[Joint("f", "prismatic", Pose(), [0, 1, 0], (0.0, 0.05))],
            open_config=[0.04, 0.0], closed_config=[0.0],
            links=[Capsule([0, 0, 0], [0, 0, 0.1], 0.008)])
    with pytest.raises(TaskValidationError):
        # open position outside the joint's limits
        FingerChain(
            joints=[Joint("f", "prismatic", Pose(), [0, 1, 0], (0.0, 0.05))],
            open_config=[0.2], closed_config=[0.0],
            links=[Capsule([0, 0, 0], [0, 0, 0.1], 0.008)])


def test_capsule_needs_positive_radius():
    with pytest.raises(TaskValidationError):
        Capsule([0, 0, 0], [0, 0, 1], 0.0)


# ---------------------------------------------------------------------------
# robot descriptions


def test_unknown_end_effector_lists_available(arm):
    with pytest.raises(TaskValidationError, match="parallel"):
        arm.end_effector("suction")


def test_flange_offset_inverts_tcp_offset(arm):
    ee = arm.end_effector("parallel")
    ident = ee.tcp_offset.compose(arm.flange_offset("parallel"))
    assert np.allclose(ident.position, 0.0, atol=1e-12)
    assert quat_angle_between(ident.orientation,
                              np.array([0, 0, 0, 1.0])) < 1e-12


def test_load_robot_from_dict():
    model = load_robot({
        "name": "mini",
        "joints": [{"name": "a", "type": "revolute", "axis": [0, 0, 1],
                    "limits": [-1, 1]}],
    })
    assert model.chain.dof == 1
    assert model.end_effectors == {}


def test_load_robot_error_matrix(tmp_path):
    with pytest.raises(TaskValidationError, match="cannot read"):
        load_robot(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(TaskValidationError, match="cannot read"):
        load_robot(bad)
    with pytest.raises(TaskValidationError):
        load_robot([1, 2, 3])
    with pytest.raises(TaskValidationError, match="no joints"):
        load_robot({"name": "empty", "joints": []})
    with pytest.raises(TaskValidationError, match="missing"):
        load_robot({"joints": [{"name": "a", "type": "revolute"}]})
    with pytest.raises(TaskValidationError, match="limits"):
        load_robot({"joints": [{"name": "a", "type": "revolute",
                                "axis": [0, 0, 1]}]})
