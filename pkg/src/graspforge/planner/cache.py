"""Generated-grasp cache keyed by end effector and object geometry digest.

Generation is the expensive stage and depends only on the object mesh and
the hand, so its output is cached while filtering and scoring always
rerun. Disk mode stores one JSON file per key with a provenance header;
anything unreadable is treated as a miss, never an error.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import re
from dataclasses import dataclass
from pathlib import Path

from ..taskmodel import Grasp

logger = logging.getLogger(__name__)

CACHE_FORMAT = "graspforge-cache-v1"


def generation_params_hash(generator_name: str, params: dict,
                           seed: int) -> str:
    """Digest of everything that determines generator output for a mesh."""
    blob = json.dumps({"generator": generator_name, "params": params,
                       "seed": seed}, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


@dataclass
class GraspCacheEntry:
    ee_name: str
    digest: str
    grasps: list
    params_hash: str
    generator_name: str = ""

    def to_doc(self) -> dict:
        return {
            "format": CACHE_FORMAT,
            "ee_name": self.ee_name,
            "digest": self.digest,
            "generator": self.generator_name,
            "params_hash": self.params_hash,
            "grasps": [g.to_dict() for g in self.grasps],
        }

    @staticmethod
    def from_doc(doc: dict) -> "GraspCacheEntry":
        if doc.get("format") != CACHE_FORMAT:
            raise ValueError(f"unknown cache format: {doc.get('format')!r}")
        return GraspCacheEntry(
            ee_name=doc["ee_name"],
            digest=doc["digest"],
            grasps=[Grasp.from_dict(g) for g in doc["grasps"]],
            params_hash=doc["params_hash"],
            generator_name=doc.get("generator", ""),
        )


def _sanitize(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_-]", "_", name)


def entry_key(ee_name: str, digest: str) -> str:
    """Human-usable cache key, also the disk filename stem."""
    return f"{digest}__{_sanitize(ee_name)}"


class MemoryGraspCache:
    """Process-local cache; lives as long as the planner that owns it."""

    def __init__(self):
        self._entries = {}

    def get(self, ee_name: str, digest: str):
        return self._entries.get(entry_key(ee_name, digest))

    def put(self, entry: GraspCacheEntry):
        key = entry_key(entry.ee_name, entry.digest)
        old = self._entries.get(key)
        if old is not None and old.params_hash != entry.params_hash:
            logger.warning(
                "cache key %s: generation parameters changed, overwriting", key)
        self._entries[key] = entry

    def keys(self):
        return sorted(self._entries)

    def inspect(self, key: str):
        return self._entries.get(key)

    def clear(self) -> int:
        n = len(self._entries)
        self._entries.clear()
        return n


class DiskGraspCache:
    """One JSON file per (ee, digest) key under a cache directory."""

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def _load(self, path: Path):
        try:
            return GraspCacheEntry.from_doc(json.loads(path.read_text()))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            logger.warning("unreadable cache entry %s: %s", path.name, exc)
            return None

    def get(self, ee_name: str, digest: str):
        path = self._path(entry_key(ee_name, digest))
        if not path.exists():
            return None
        return self._load(path)

    def put(self, entry: GraspCacheEntry):
        key = entry_key(entry.ee_name, entry.digest)
        path = self._path(key)
        if path.exists():
            old = self._load(path)
            if old is not None and old.params_hash != entry.params_hash:
                logger.warning(
                    "cache key %s: generation parameters changed, overwriting",
                    key)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(entry.to_doc()))
        os.replace(tmp, path)

    def keys(self):
        return sorted(p.stem for p in self.directory.glob("*.json"))

    def inspect(self, key: str):
        path = self._path(key)
        if not path.exists():
            return None
        return self._load(path)

    def clear(self) -> int:
        n = 0
        for p in self.directory.glob("*.json"):
            p.unlink()
            n += 1
        return n
