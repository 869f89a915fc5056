"""Grasp filtering: keep candidates the arm can reach at every task step."""

from __future__ import annotations

import logging
import threading
from concurrent.futures import ThreadPoolExecutor

from ..kinematics import (DEFAULT_MAX_RESTARTS, DEFAULT_POS_TOL,
                          DEFAULT_ROT_TOL, solve_ik_toleranced)
from .candidate import GraspCandidate
from .registry import FILTER, default_registry

logger = logging.getLogger(__name__)


def _step_rng_seed(base_seed: int, grasp_index: int, step_index: int) -> int:
    # Stable mix so results do not depend on evaluation order or thread count.
    return (base_seed * 1000003 + grasp_index * 8191 + step_index) & 0x7FFFFFFF


@default_registry.register(FILTER, "reachability")
class ReachabilityFilter:
    """Sequential-step IK screen.

    For each grasp the steps are solved in order; the solution of step k
    seeds step k+1 so consecutive configurations stay close. The task's
    start configuration seeds the first step. A grasp survives only when
    every step admits a solution, exactly or inside the step's tolerance.
    """

    def __init__(self, pos_tol: float = DEFAULT_POS_TOL,
                 rot_tol: float = DEFAULT_ROT_TOL,
                 max_restarts: int = DEFAULT_MAX_RESTARTS,
                 sample_restarts: int = 2, n_samples: int = 16):
        self.pos_tol = float(pos_tol)
        self.rot_tol = float(rot_tol)
        self.max_restarts = int(max_restarts)
        self.sample_restarts = int(sample_restarts)
        self.n_samples = int(n_samples)

    def filter(self, grasps, task, robot, seed: int = 0, jobs: int = 1,
               progress=None) -> list:
        chain = robot.chain
        flange = robot.flange_offset(task.ee_group)
        start = task.start_arm_config or None
        done = [0]
        lock = threading.Lock()

        def screen(item):
            gi, grasp = item
            grasp_offset = grasp.tcp_in_object.compose(flange)
            seed_cfg = start
            statuses = []
            configs = []
            result = None
            for si, step in enumerate(task.steps):
                res = solve_ik_toleranced(
                    chain, step, grasp_offset, seed_cfg,
                    pos_tol=self.pos_tol, rot_tol=self.rot_tol,
                    max_restarts=self.max_restarts,
                    sample_restarts=self.sample_restarts,
                    n_samples=self.n_samples,
                    rng_seed=_step_rng_seed(seed, gi, si))
                if res is None:
                    break
                cfg, status = res
                statuses.append(status)
                configs.append(cfg)
                seed_cfg = cfg
            else:
                result = GraspCandidate(grasp=grasp, per_step_status=statuses,
                                        step_configs=configs, gen_index=gi)
            if progress is not None:
                with lock:
                    done[0] += 1
                    progress(done[0], len(grasps))
            return result

        items = list(enumerate(grasps))
        if jobs > 1 and len(items) > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(screen, items))
        else:
            results = [screen(item) for item in items]
        kept = [r for r in results if r is not None]
        logger.debug("reachability filter kept %d of %d grasps",
                     len(kept), len(grasps))
        return kept
