"""Grasp planning pipeline: generators, filters, evaluators, cache."""

from .candidate import GraspCandidate
from .cache import (DiskGraspCache, GraspCacheEntry, MemoryGraspCache,
                    entry_key, generation_params_hash)
from .pipeline import Planner, PlannerConfig
from .registry import (EVALUATOR, FILTER, GENERATOR, PluginRegistry,
                       default_registry)
from .wrench import ContactSet, force_closure_epsilon, primitive_wrenches

# Importing these modules registers the built-in plugins.
from . import evaluators, filters, generators  # noqa: F401

__all__ = [
    "GraspCandidate", "Planner", "PlannerConfig", "PluginRegistry",
    "default_registry", "GENERATOR", "FILTER", "EVALUATOR",
    "MemoryGraspCache", "DiskGraspCache", "GraspCacheEntry", "entry_key",
    "generation_params_hash", "ContactSet", "force_closure_epsilon",
    "primitive_wrenches",
]
