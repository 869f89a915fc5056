"""Task documents: the object, its waypoint steps, and grasp records.

A task names an end-effector group, carries the manipulated object with its
initial pose, and lists toleranced object waypoints. Grasps are stored
relative to the object so one grasp serves every step.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import TaskValidationError
from .geometry import (TriMesh, box_mesh, cylinder_mesh, icosphere_mesh,
                       load_mesh)
from .kinematics import RobotModel
from .transforms import Pose


@dataclass
class ObjectInfo:
    """The manipulated object: mesh in its own frame, posed in the world."""

    mesh: TriMesh
    pose: Pose = field(default_factory=Pose.identity)
    source: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.mesh.is_empty:
            raise TaskValidationError("object mesh has no faces")


@dataclass
class TolerancedStep:
    """One object waypoint with a symmetric pose tolerance.

    ``tol_pos`` is the half-extent of the allowed position box and
    ``tol_rot`` the half-range of Euler offsets, both expressed in the
    step's own frame.
    """

    pose: Pose
    tol_pos: np.ndarray = field(default_factory=lambda: np.zeros(3))
    tol_rot: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        self.tol_pos = np.asarray(self.tol_pos, dtype=float).reshape(3)
        self.tol_rot = np.asarray(self.tol_rot, dtype=float).reshape(3)
        if np.any(self.tol_pos < 0.0):
            raise TaskValidationError("tol_pos values must be non-negative")
        if np.any(self.tol_rot < 0.0):
            raise TaskValidationError("tol_rot values must be non-negative")


@dataclass
class Grasp:
    """A hand placement relative to the object, with its finger shape."""

    tcp_in_object: Pose
    finger_config: dict
    ee_name: str
    contacts: list = field(default_factory=list)

    def to_dict(self) -> dict:
        doc = {
            "tcp_in_object": self.tcp_in_object.to_dict(),
            "finger_config": {k: float(v)
                              for k, v in self.finger_config.items()},
            "ee_name": self.ee_name,
        }
        if self.contacts:
            doc["contacts"] = [{
                "point": [float(v) for v in c.point],
                "normal": [float(v) for v in c.normal],
                "link": c.link,
            } for c in self.contacts]
        return doc

    @staticmethod
    def from_dict(doc: dict) -> "Grasp":
        from .kinematics import Contact

        contacts = [Contact(np.array(c["point"]), np.array(c["normal"]),
                            c.get("link", ""))
                    for c in doc.get("contacts", [])]
        return Grasp(
            tcp_in_object=Pose.from_dict(doc["tcp_in_object"]),
            finger_config=dict(doc.get("finger_config", {})),
            ee_name=doc["ee_name"],
            contacts=contacts,
        )


@dataclass
class TaskDescription:
    """A full manipulation request: ee group, object, steps, arm start."""

    ee_group: str
    obj: ObjectInfo
    steps: list
    start_arm_config: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.steps:
            raise TaskValidationError("task needs at least one step")


def tcp_world_pose(step_pose: Pose, grasp: Grasp) -> Pose:
    """Where the hand's TCP sits in the world when the object is at step_pose."""
    return step_pose.compose(grasp.tcp_in_object)


def update_object(task: TaskDescription, obj: ObjectInfo) -> TaskDescription:
    """Same task with a different object; waypoints carry over untouched."""
    return replace(task, obj=obj)


# ---------------------------------------------------------------------------
# Parsing


def geometry_from_doc(doc: dict, base_dir=None) -> TriMesh:
    """Mesh from an object geometry entry: a file reference or a primitive."""
    if "mesh_file" in doc:
        path = Path(doc["mesh_file"])
        if not path.is_absolute() and base_dir is not None:
            path = Path(base_dir) / path
        if not path.exists():
            raise TaskValidationError(f"object mesh file not found: {path}")
        return load_mesh(path)
    if "primitive" in doc:
        prim = doc["primitive"]
        kind = prim.get("kind")
        if kind == "box":
            return box_mesh(prim["size"])
        if kind == "cylinder":
            return cylinder_mesh(prim["radius"], prim["height"],
                                 prim.get("segments", 32))
        if kind == "sphere":
            return icosphere_mesh(prim["radius"], prim.get("subdivisions", 2))
        raise TaskValidationError(f"unknown primitive kind: {kind!r}")
    raise TaskValidationError(
        "object geometry needs either 'mesh_file' or 'primitive'")


def parse_object(doc: dict, base_dir=None) -> ObjectInfo:
    if not isinstance(doc, dict):
        raise TaskValidationError("object entry must be a JSON object")
    mesh = geometry_from_doc(doc, base_dir)
    pose = Pose.from_dict(doc.get("pose", {}))
    source = {k: v for k, v in doc.items() if k in ("mesh_file", "primitive")}
    return ObjectInfo(mesh=mesh, pose=pose, source=source)


def _parse_pose_entry(doc, where: str) -> Pose:
    if not isinstance(doc, dict):
        raise TaskValidationError(f"{where}: pose must be an object")
    try:
        return Pose.from_dict(doc)
    except Exception as exc:
        raise TaskValidationError(f"{where}: {exc}") from exc


def parse_task(source, robot: RobotModel | None = None,
               base_dir=None) -> TaskDescription:
    """Validate and build a task from a JSON document, path, or dict.

    When ``robot`` is given, the ee group and the start configuration are
    checked against it. Mesh file references resolve relative to
    ``base_dir`` (or the document's own directory when loaded by path).
    """
    if isinstance(source, (str, Path)):
        path = Path(source)
        if base_dir is None:
            base_dir = path.parent
        try:
            doc = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise TaskValidationError(f"cannot read task {path}: {exc}") from exc
    else:
        doc = source
    if not isinstance(doc, dict):
        raise TaskValidationError("task document must be a JSON object")

    ee_group = doc.get("ee_group")
    if not ee_group or not isinstance(ee_group, str):
        raise TaskValidationError("task needs a non-empty 'ee_group' string")
    if "object" not in doc:
        raise TaskValidationError("task needs an 'object' entry")
    obj = parse_object(doc["object"], base_dir)

    steps_doc = doc.get("steps")
    if not isinstance(steps_doc, list) or not steps_doc:
        raise TaskValidationError("task needs a non-empty 'steps' list")
    n = len(steps_doc)
    tol_pos = doc.get("tol_pos", [[0.0, 0.0, 0.0]] * n)
    tol_rot = doc.get("tol_rot", [[0.0, 0.0, 0.0]] * n)
    if len(tol_pos) != n:
        raise TaskValidationError(
            f"tol_pos has {len(tol_pos)} entries for {n} steps")
    if len(tol_rot) != n:
        raise TaskValidationError(
            f"tol_rot has {len(tol_rot)} entries for {n} steps")

    steps = []
    for i, sdoc in enumerate(steps_doc):
        pose = _parse_pose_entry(sdoc, f"steps[{i}]")
        tp = np.asarray(tol_pos[i], dtype=float)
        tr = np.asarray(tol_rot[i], dtype=float)
        if tp.shape != (3,) or tr.shape != (3,):
            raise TaskValidationError(
                f"steps[{i}]: tolerances must have three components")
        if np.any(tp < 0.0) or np.any(tr < 0.0):
            raise TaskValidationError(f"steps[{i}]: negative tolerance")
        steps.append(TolerancedStep(pose, tp, tr))

    if "start_arm_config" not in doc:
        raise TaskValidationError(
            "task needs a 'start_arm_config' map; when in doubt use the "
            "arm's neutral configuration (see kinematics.neutral_config)")
    start = doc["start_arm_config"]
    if not isinstance(start, dict) or not start:
        raise TaskValidationError(
            "start_arm_config must be a non-empty name->value map")
    start = {str(k): float(v) for k, v in start.items()}

    if robot is not None:
        robot.end_effector(ee_group)
        unknown = [k for k in start if k not in robot.chain.joint_names]
        if unknown:
            raise TaskValidationError(
                f"start_arm_config names unknown joints: {', '.join(unknown)}")
        missing = [k for k in robot.chain.joint_names if k not in start]
        if missing:
            raise TaskValidationError(
                f"start_arm_config missing joints: {', '.join(missing)}")

    return TaskDescription(ee_group=ee_group, obj=obj, steps=steps,
                           start_arm_config=start)


def serialize_task(task: TaskDescription) -> dict:
    """Round-trippable JSON form of a task."""
    obj_doc = dict(task.obj.source)
    obj_doc["pose"] = task.obj.pose.to_dict()
    return {
        "ee_group": task.ee_group,
        "object": obj_doc,
        "steps": [s.pose.to_dict() for s in task.steps],
        "tol_pos": [[float(v) for v in s.tol_pos] for s in task.steps],
        "tol_rot": [[float(v) for v in s.tol_rot] for s in task.steps],
        "start_arm_config": {k: float(v)
                             for k, v in task.start_arm_config.items()},
    }


def grasps_to_doc(candidates) -> dict:
    """Planner output as the on-disk grasp list format."""
    out = []
    for cand in candidates:
        doc = cand.grasp.to_dict()
        doc.pop("contacts", None)
        doc["score"] = float(cand.score)
        doc["per_step"] = [{"status": s} for s in cand.per_step_status]
        out.append(doc)
    return {"grasps": out}
