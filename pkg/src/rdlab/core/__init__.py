"""Core lab modules."""

from .config import LabConfig, get_config, set_config
from .lab import Laboratory

__all__ = ["Laboratory", "LabConfig", "get_config", "set_config"]
