"""Planner output record."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..taskmodel import Grasp


@dataclass
class GraspCandidate:
    """A grasp that survived filtering, with its per-step evidence.

    ``per_step_status`` holds "exact" or "tolerance_only" per task step;
    ``step_configs`` the arm configuration the filter found for each step.
    ``gen_index`` is the grasp's position in the generator output and is
    the deterministic tie-breaker when scores are equal.
    """

    grasp: Grasp
    per_step_status: list = field(default_factory=list)
    step_configs: list = field(default_factory=list)
    score: float = 0.0
    gen_index: int = -1
