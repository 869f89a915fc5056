"""Shared fixtures: the reference arm, a planar test chain, small meshes."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings

from graspforge.geometry import box_mesh
from graspforge.kinematics import Joint, KinematicChain, load_robot
from graspforge.planner import PlannerConfig
from graspforge.transforms import Pose

settings.register_profile("suite", deadline=None, max_examples=40)
settings.load_profile("suite")

FIXTURE_DIR = Path(resources.files("graspforge") / "fixtures")

START_CONFIG = {"j1": 0.0, "j2": 0.49, "j3": 1.57, "j4": 0.0,
                "j5": 1.08, "j6": 0.0}


@pytest.fixture(scope="session")
def fixture_dir() -> Path:
    return FIXTURE_DIR


@pytest.fixture(scope="session")
def arm():
    return load_robot(FIXTURE_DIR / "robot_arm6.json")


@pytest.fixture(scope="session")
def chain(arm):
    return arm.chain


@pytest.fixture(scope="session")
def parallel_ee(arm):
    return arm.end_effector("parallel")


@pytest.fixture(scope="session")
def start_config():
    return dict(START_CONFIG)


def make_planar_chain() -> KinematicChain:
    """Two revolute links of length 1 in the xy plane.

    The chain representation places each joint's motion after its fixed
    origin offset, so the fingertip needs a terminal mount: a prismatic
    joint locked at zero carries the second link's length without adding
    real mobility.
    """
    joints = [
        Joint("shoulder", "revolute", Pose(), [0.0, 0.0, 1.0],
              (-np.pi, np.pi)),
        Joint("elbow", "revolute", Pose([1.0, 0.0, 0.0]), [0.0, 0.0, 1.0],
              (-np.pi, np.pi)),
        Joint("mount", "prismatic", Pose([1.0, 0.0, 0.0]), [0.0, 0.0, 1.0],
              (0.0, 0.0)),
    ]
    return KinematicChain(joints, base_frame="base", tip_frame="tip",
                          name="planar2r")


def planar_config(q1: float, q2: float) -> dict:
    return {"shoulder": float(q1), "elbow": float(q2), "mount": 0.0}


@pytest.fixture()
def planar():
    return make_planar_chain()


@pytest.fixture()
def cube4():
    return box_mesh([0.04, 0.04, 0.04])


@pytest.fixture()
def quick_config():
    return PlannerConfig(
        generator_params={"n_samples": 60, "roll_count": 4})


@pytest.fixture(scope="session")
def boundary(arm):
    """A task-step pose 1 cm beyond the arm's reach, plus a helpful seed.

    With the elbow row stretched flat the tool center sits at the
    workspace boundary; pushing the nominal 1 cm further out along the
    approach axis makes it strictly unreachable at zero tolerance, while
    2 cm position tolerance admits targets pulled back inside the shell.
    """
    stretched = {"j1": 0.0, "j2": np.pi / 2, "j3": 0.0, "j4": 0.0,
                 "j5": 0.0, "j6": 0.0}
    tcp = arm.tcp_pose(stretched, "parallel")
    outward = tcp.rotate([0.0, 0.0, 1.0])
    nominal = Pose(tcp.position + 0.01 * outward, tcp.orientation)
    return {"nominal": nominal, "seed": stretched, "tcp": tcp,
            "offset": arm.flange_offset("parallel")}
