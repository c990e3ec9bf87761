"""Minimum-area disk multi-covers with optional center separation."""
from .geometry import Disk, Point
from .instance import GeneratorConfig, InfeasibleInstanceError, Instance, InstanceError

__version__ = "0.1.0"

__all__ = ["Disk", "GeneratorConfig", "InfeasibleInstanceError", "Instance", "InstanceError", "Point"]
