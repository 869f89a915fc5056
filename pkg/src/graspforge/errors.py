"""Exception types shared across the toolkit."""


class GraspForgeError(Exception):
    """Base class for all errors raised by this package."""


class InvalidGeometryError(GraspForgeError):
    """Mesh or point cloud input violates a structural requirement."""


class ReconstructionError(GraspForgeError):
    """Surface reconstruction from points is not possible."""


class IncompleteConfigError(GraspForgeError):
    """A joint configuration is missing values for required joints."""


class PenetrationError(GraspForgeError):
    """The hand starts out penetrating the object."""


class TaskValidationError(GraspForgeError):
    """A task or robot document failed validation.

    The message names the offending field so callers can surface it.
    """


class PluginError(GraspForgeError):
    """Unknown plugin name or a plugin factory misbehaved."""


class CacheError(GraspForgeError):
    """Grasp cache backend failure that cannot be treated as a miss."""


class SuiteError(GraspForgeError):
    """A verification suite file is malformed."""
