"""graspforge: task-aware grasp planning for serial arms with simple hands."""

__version__ = "0.1.0"
