"""Planning service: sessions, grasp queries, object updates, ROI edits.

Each session holds one robot, one task, and the latest plan result. All
mutating calls on a session serialize through its lock and bump a
revision counter; writes that cite an out-of-date revision are refused
so a browser working against stale state cannot clobber newer edits.
Reads never take the lock: they work from an immutable snapshot swapped
in at the end of each mutation, so the scene stays available while a
long plan holds the write lock.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import os
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from fastapi import FastAPI, HTTPException
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .errors import GraspForgeError, ReconstructionError
from .geometry import PointCloud, RoiBox, TriMesh, crop_cloud, mesh_digest, \
    reconstruct_mesh
from .kinematics import RobotModel, load_robot
from .planner import Planner, PlannerConfig
from .taskmodel import ObjectInfo, parse_object, parse_task, serialize_task, \
    tcp_world_pose, update_object
from .transforms import Pose

DEFAULT_PORT = 8421
MAX_CLOUD_POINTS = 5_000_000


def _err(status: int, message: str) -> HTTPException:
    return HTTPException(status_code=status, detail=message)


@dataclass
class SessionView:
    """Immutable per-revision snapshot handed to read endpoints."""

    revision: int
    task: object
    candidates: tuple
    result_revision: int | None
    selected: int | None
    roi: RoiBox | None


@dataclass
class Session:
    id: str
    robot: RobotModel
    planner: Planner
    lock: threading.Lock = field(default_factory=threading.Lock)
    view: SessionView = None
    progress: dict = field(default_factory=lambda: {"phase": "idle",
                                                    "fraction": 0.0})

    def publish(self, **changes):
        """Swap in a new snapshot; callers must hold the lock."""
        base = {
            "revision": self.view.revision + 1,
            "task": self.view.task,
            "candidates": self.view.candidates,
            "result_revision": self.view.result_revision,
            "selected": self.view.selected,
            "roi": self.view.roi,
        }
        base.update(changes)
        self.view = SessionView(**base)
        return self.view


class SessionManager:
    """Registry of live sessions; safe to share across request threads."""

    def __init__(self):
        self._sessions = {}
        self._lock = threading.Lock()
        self._counter = itertools.count(1)

    def create(self, robot: RobotModel, task, planner: Planner) -> Session:
        with self._lock:
            sid = f"s{next(self._counter)}"
            session = Session(id=sid, robot=robot, planner=planner)
            session.view = SessionView(revision=0, task=task, candidates=(),
                                       result_revision=None, selected=None,
                                       roi=None)
            self._sessions[sid] = session
            return session

    def get(self, sid: str) -> Session:
        with self._lock:
            session = self._sessions.get(sid)
        if session is None:
            raise _err(404, f"no session {sid!r}")
        return session


def _pose_doc(pose: Pose) -> dict:
    return pose.to_dict()


def _mesh_doc(mesh) -> dict:
    return {
        "vertices": [[float(v) for v in row] for row in mesh.vertices],
        "faces": [[int(i) for i in row] for row in mesh.faces],
    }


def _skeleton_doc(robot: RobotModel, config: dict) -> dict:
    chain = robot.chain
    q = chain.config_to_vector(config) if config else chain.mid_config_vector()
    tip, anchors, axes = chain.frames(q)
    return {
        "joints": [{
            "name": j.name,
            "type": j.jtype,
            "anchor": [float(v) for v in anchors[i]],
            "axis": [float(v) for v in axes[i]],
        } for i, j in enumerate(chain.joints)],
        "tip": _pose_doc(Pose.from_matrix(tip)),
    }


def _candidate_doc(index: int, cand, obj_pose: Pose) -> dict:
    return {
        "index": index,
        "score": float(cand.score),
        "per_step_status": list(cand.per_step_status),
        "tcp_in_object": _pose_doc(cand.grasp.tcp_in_object),
        "tcp_world": _pose_doc(obj_pose.compose(cand.grasp.tcp_in_object)),
        "finger_config": {k: float(v)
                          for k, v in cand.grasp.finger_config.items()},
    }


def _scene_doc(session: Session) -> dict:
    view = session.view
    task = view.task
    doc = {
        "session": session.id,
        "revision": view.revision,
        "object": {
            "mesh": _mesh_doc(task.obj.mesh),
            "pose": _pose_doc(task.obj.pose),
            "digest": mesh_digest(task.obj.mesh).hex,
        },
        "steps": [{
            "pose": _pose_doc(s.pose),
            "tol_pos": [float(v) for v in s.tol_pos],
            "tol_rot": [float(v) for v in s.tol_rot],
        } for s in task.steps],
        "robot": _skeleton_doc(session.robot, task.start_arm_config),
        "candidates": [_candidate_doc(i, c, task.obj.pose)
                       for i, c in enumerate(view.candidates)],
        "selected": view.selected,
        "roi": None if view.roi is None else {
            "pose": _pose_doc(view.roi.pose),
            "half_extents": [float(v) for v in view.roi.half_extents],
        },
    }
    payload = json.dumps(doc, sort_keys=True).encode()
    doc["content_hash"] = hashlib.sha256(payload).hexdigest()
    return doc


def _parse_cloud_doc(doc) -> PointCloud:
    if not isinstance(doc, dict) or "points" not in doc:
        raise _err(400, "cloud needs a 'points' array")
    points = doc["points"]
    if len(points) > MAX_CLOUD_POINTS:
        raise _err(413, f"cloud exceeds {MAX_CLOUD_POINTS} points")
    try:
        arr = np.asarray(points, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 3:
            raise ValueError(f"expected Nx3, got {arr.shape}")
    except ValueError as exc:
        raise _err(400, f"bad cloud points: {exc}")
    return PointCloud(arr, doc.get("frame", "world"))


def _parse_roi_doc(doc) -> RoiBox:
    if not isinstance(doc, dict):
        raise _err(400, "roi box must be an object")
    try:
        pose = Pose.from_dict(doc.get("pose", {}))
        half = doc.get("half_extents")
        if half is None:
            raise ValueError("missing 'half_extents'")
        return RoiBox(pose, half)
    except (GraspForgeError, ValueError, TypeError) as exc:
        raise _err(400, f"bad roi box: {exc}")


def default_cache_dir() -> str | None:
    return os.environ.get("GRASPFORGE_CACHE_DIR")


def create_app(ui_dir: str | None = None) -> FastAPI:
    """Build the service; sessions live for the lifetime of the app."""
    app = FastAPI(title="graspforge", docs_url=None, redoc_url=None)
    manager = SessionManager()
    app.state.sessions = manager

    @app.exception_handler(GraspForgeError)
    def _domain_error(request, exc):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.post("/sessions", status_code=201)
    def create_session(body: dict):
        robot_doc = body.get("robot")
        task_doc = body.get("task")
        if robot_doc is None or task_doc is None:
            raise _err(400, "body needs 'robot' and 'task' documents")
        robot = load_robot(robot_doc)
        task = parse_task(task_doc, robot)
        config_doc = body.get("config")
        if config_doc is not None:
            config = PlannerConfig.from_doc(config_doc)
        else:
            cache_dir = default_cache_dir()
            if cache_dir:
                config = PlannerConfig(cache_mode="disk", cache_dir=cache_dir)
            else:
                config = PlannerConfig()
        planner = Planner(robot, config)
        session = manager.create(robot, task, planner)
        return {"id": session.id, "revision": 0,
                "steps": len(task.steps)}

    @app.get("/sessions/{sid}/scene")
    def get_scene(sid: str):
        return _scene_doc(manager.get(sid))

    @app.get("/sessions/{sid}/progress")
    def get_progress(sid: str):
        session = manager.get(sid)
        return dict(session.progress)

    @app.post("/sessions/{sid}/grasps")
    def plan_grasps(sid: str, body: dict = None):
        session = manager.get(sid)
        body = body or {}
        seed = int(body.get("seed", 0))
        jobs = int(body.get("jobs", 1))
        with session.lock:
            task = session.view.task

            def report(phase, fraction):
                session.progress = {"phase": phase,
                                    "fraction": round(float(fraction), 4)}

            try:
                result = session.planner.plan(task, seed=seed, jobs=jobs,
                                              progress=report)
            finally:
                session.progress = {"phase": "idle", "fraction": 0.0}
            new_revision = session.view.revision + 1
            view = session.publish(candidates=tuple(result),
                                   result_revision=new_revision,
                                   selected=None)
        return {
            "revision": view.revision,
            "count": len(result),
            "candidates": [_candidate_doc(i, c, task.obj.pose)
                           for i, c in enumerate(result)],
            "timings": session.planner.last_timings,
        }

    @app.get("/sessions/{sid}/grasps")
    def get_grasps(sid: str):
        session = manager.get(sid)
        view = session.view
        if view.result_revision is None:
            return {"revision": view.revision, "planned": False,
                    "count": 0, "candidates": []}
        return {
            "revision": view.revision,
            "planned": True,
            "count": len(view.candidates),
            "candidates": [_candidate_doc(i, c, view.task.obj.pose)
                           for i, c in enumerate(view.candidates)],
        }

    @app.post("/sessions/{sid}/select")
    def select_grasp(sid: str, body: dict):
        session = manager.get(sid)
        if "index" not in body or "revision" not in body:
            raise _err(400, "body needs 'index' and 'revision'")
        index = int(body["index"])
        revision = int(body["revision"])
        with session.lock:
            view = session.view
            if revision != view.revision:
                raise _err(409, f"stale revision {revision}, "
                                f"session is at {view.revision}")
            if view.result_revision is None:
                raise _err(409, "no plan result to select from")
            if not 0 <= index < len(view.candidates):
                raise _err(400, f"index {index} out of range "
                                f"(result has {len(view.candidates)})")
            new_view = session.publish(selected=index)
            cand = view.candidates[index]
            task = view.task
            waypoints = [
                _pose_doc(tcp_world_pose(step.pose, cand.grasp))
                for step in task.steps
            ]
        return {"revision": new_view.revision, "selected": index,
                "ee_waypoints": waypoints}

    @app.post("/sessions/{sid}/object")
    def update_session_object(sid: str, body: dict):
        session = manager.get(sid)
        if "object" not in body:
            raise _err(400, "body needs an 'object' geometry document")
        obj = parse_object(body["object"])
        with session.lock:
            task = update_object(session.view.task, obj)
            view = session.publish(task=task, candidates=(),
                                   result_revision=None, selected=None)
        return {"revision": view.revision,
                "digest": mesh_digest(obj.mesh).hex,
                "steps": len(task.steps)}

    @app.post("/sessions/{sid}/roi")
    def apply_roi(sid: str, body: dict):
        session = manager.get(sid)
        if "cloud" not in body or "box" not in body:
            raise _err(400, "body needs 'cloud' and 'box'")
        cloud = _parse_cloud_doc(body["cloud"])
        box = _parse_roi_doc(body["box"])
        with session.lock:
            cropped = crop_cloud(cloud, box)
            try:
                world_mesh = reconstruct_mesh(cropped)
            except ReconstructionError as exc:
                # Session untouched: same revision, same scene.
                raise _err(409, f"{exc} ({len(cropped)} points in box)")
            # The cloud lives in the world; the task stores the mesh in the
            # object's own frame so steps keep carrying it rigidly.
            old_pose = session.view.task.obj.pose
            mesh = TriMesh(
                old_pose.inverse().transform_points(world_mesh.vertices),
                world_mesh.faces)
            obj = ObjectInfo(mesh=mesh, pose=old_pose,
                             source={"reconstructed": {"points": len(cropped)}})
            task = update_object(session.view.task, obj)
            view = session.publish(task=task, candidates=(),
                                   result_revision=None, selected=None,
                                   roi=box)
        return {"revision": view.revision,
                "points_in_box": len(cropped),
                "mesh": _mesh_doc(mesh),
                "digest": mesh_digest(mesh).hex}

    @app.get("/sessions/{sid}/task")
    def get_task(sid: str):
        session = manager.get(sid)
        return serialize_task(session.view.task)

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def bundled_ui_dir() -> str | None:
    """Directory with the built web client, when it shipped alongside."""
    candidate = Path(__file__).parent / "static" / "ui"
    return str(candidate) if candidate.is_dir() else None


def serve(port: int | None = None, ui_dir: str | None = None):
    """Run the service on the given port (GRASPFORGE_PORT fallback)."""
    import uvicorn

    if port is None:
        port = int(os.environ.get("GRASPFORGE_PORT", DEFAULT_PORT))
    app = create_app(ui_dir=ui_dir if ui_dir is not None else bundled_ui_dir())
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")
