"""The generate / filter / evaluate pipeline with its grasp cache."""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import TaskValidationError
from ..geometry import mesh_digest
from ..kinematics import RobotModel
from ..taskmodel import TaskDescription
from .cache import (DiskGraspCache, GraspCacheEntry, MemoryGraspCache,
                    generation_params_hash)
from .registry import EVALUATOR, FILTER, GENERATOR, default_registry

logger = logging.getLogger(__name__)


@dataclass
class PlannerConfig:
    """Which plugin runs each stage, and how results are cached."""

    generator_name: str = "surface"
    generator_params: dict = field(default_factory=dict)
    filter_name: str = "reachability"
    filter_params: dict = field(default_factory=dict)
    evaluator_name: str = "combined"
    evaluator_params: dict = field(default_factory=dict)
    cache_mode: str = "memory"
    cache_dir: str | None = None

    def __post_init__(self):
        if self.cache_mode not in ("memory", "disk"):
            raise TaskValidationError(
                f"cache mode must be 'memory' or 'disk', got {self.cache_mode!r}")
        if self.cache_mode == "disk" and not self.cache_dir:
            raise TaskValidationError("disk cache mode needs a cache dir")

    @staticmethod
    def from_doc(doc: dict) -> "PlannerConfig":
        if not isinstance(doc, dict):
            raise TaskValidationError("planner config must be a JSON object")
        cfg = PlannerConfig()
        for stage, name_attr, params_attr in (
                ("generator", "generator_name", "generator_params"),
                ("filter", "filter_name", "filter_params"),
                ("evaluator", "evaluator_name", "evaluator_params")):
            entry = doc.get(stage)
            if entry is None:
                continue
            if not isinstance(entry, dict) or "name" not in entry:
                raise TaskValidationError(
                    f"planner config {stage} entry needs a 'name'")
            setattr(cfg, name_attr, entry["name"])
            setattr(cfg, params_attr, dict(entry.get("params", {})))
        cache = doc.get("cache")
        if cache is not None:
            cfg.cache_mode = cache.get("mode", "memory")
            cfg.cache_dir = cache.get("dir")
            PlannerConfig.__post_init__(cfg)
        return cfg

    @staticmethod
    def from_file(path) -> "PlannerConfig":
        try:
            doc = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise TaskValidationError(
                f"cannot read planner config {path}: {exc}") from exc
        return PlannerConfig.from_doc(doc)


class Planner:
    """Owns the plugin instances and the grasp cache for repeated planning."""

    def __init__(self, robot: RobotModel, config: PlannerConfig | None = None,
                 registry=default_registry):
        self.robot = robot
        self.config = config or PlannerConfig()
        self.registry = registry
        self.generator = registry.create(GENERATOR, self.config.generator_name,
                                         self.config.generator_params)
        self.filter = registry.create(FILTER, self.config.filter_name,
                                      self.config.filter_params)
        self.evaluator = registry.create(EVALUATOR, self.config.evaluator_name,
                                         self.config.evaluator_params)
        if self.config.cache_mode == "disk":
            self.cache = DiskGraspCache(self.config.cache_dir)
        else:
            self.cache = MemoryGraspCache()
        self.stats = {"generator_invocations": 0, "cache_hits": 0}
        self.last_timings = {}

    def plan(self, task: TaskDescription, seed: int = 0, jobs: int = 1,
             progress=None) -> list:
        """Ranked surviving candidates, best first.

        Deterministic for a given (task, robot, config, seed) regardless of
        ``jobs``. An empty list is a valid outcome meaning nothing survived.
        """
        ee = self.robot.end_effector(task.ee_group)
        notify = progress or (lambda stage, fraction: None)
        timings = {}

        t0 = time.perf_counter()
        digest = mesh_digest(task.obj.mesh).hex
        phash = generation_params_hash(self.config.generator_name,
                                       self.config.generator_params, seed)
        entry = self.cache.get(ee.name, digest)
        if entry is not None and entry.params_hash == phash:
            grasps = entry.grasps
            self.stats["cache_hits"] += 1
            cached = True
        else:
            notify("generate", 0.0)
            grasps = self.generator.generate(task.obj.mesh, ee, seed)
            self.stats["generator_invocations"] += 1
            self.cache.put(GraspCacheEntry(
                ee_name=ee.name, digest=digest, grasps=grasps,
                params_hash=phash,
                generator_name=self.config.generator_name))
            cached = False
        timings["generate"] = time.perf_counter() - t0
        notify("generate", 1.0)

        t0 = time.perf_counter()
        candidates = self.filter.filter(
            grasps, task, self.robot, seed=seed, jobs=jobs,
            progress=lambda done, n: notify("filter", done / max(n, 1)))
        timings["filter"] = time.perf_counter() - t0
        notify("filter", 1.0)

        t0 = time.perf_counter()
        scores = self.evaluator.score(candidates, task, self.robot)
        for cand, score in zip(candidates, scores):
            cand.score = float(score)
        candidates.sort(key=lambda c: (-c.score, c.gen_index))
        timings["evaluate"] = time.perf_counter() - t0
        notify("done", 1.0)

        timings["cache_hit"] = cached
        timings["generated"] = len(grasps)
        timings["survivors"] = len(candidates)
        self.last_timings = timings
        logger.info(
            "plan: %d generated (%s), %d survived filtering",
            len(grasps), "cache" if cached else "fresh", len(candidates))
        return candidates
