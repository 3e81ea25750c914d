"""Data models for the lab."""

from .report import CheckReport, CheckStatus, RunSummary, jsonable

__all__ = [
    "CheckReport",
    "CheckStatus",
    "RunSummary",
    "jsonable",
]
