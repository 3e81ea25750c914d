"""Utility modules."""

from .errors import LabError
from .logging import configure_logging, get_logger

__all__ = ["LabError", "configure_logging", "get_logger"]
