"""Named factories for the three pipeline stages.

Plugins register under a kind ("generator", "filter", "evaluator") and a
name; configs then select them by name with a params dict that is passed
to the factory as keyword arguments.
"""

from __future__ import annotations

import logging

from ..errors import PluginError

logger = logging.getLogger(__name__)

GENERATOR = "generator"
FILTER = "filter"
EVALUATOR = "evaluator"
_KINDS = (GENERATOR, FILTER, EVALUATOR)


class PluginRegistry:
    def __init__(self):
        self._factories = {kind: {} for kind in _KINDS}

    def register(self, kind: str, name: str, factory=None):
        """Register a factory; usable directly or as a class decorator."""
        if kind not in _KINDS:
            raise PluginError(f"unknown plugin kind '{kind}'")

        def _do(f):
            if name in self._factories[kind]:
                logger.warning("replacing %s plugin '%s'", kind, name)
            self._factories[kind][name] = f
            return f

        return _do(factory) if factory is not None else _do

    def names(self, kind: str):
        if kind not in _KINDS:
            raise PluginError(f"unknown plugin kind '{kind}'")
        return sorted(self._factories[kind])

    def create(self, kind: str, name: str, params: dict | None = None):
        if kind not in _KINDS:
            raise PluginError(f"unknown plugin kind '{kind}'")
        try:
            factory = self._factories[kind][name]
        except KeyError:
            known = ", ".join(self.names(kind)) or "none registered"
            raise PluginError(
                f"unknown {kind} '{name}' (available: {known})") from None
        try:
            return factory(**(params or {}))
        except TypeError as exc:
            raise PluginError(f"{kind} '{name}': bad params: {exc}") from exc


default_registry = PluginRegistry()
