"""Resolvent-degree bound engine."""

from .engine import BoundEngine, BoundTable, DerivationTrace, Relation
from .facts import FactBase, load_fact_base
from .groups import GroupId, parse_group

__all__ = [
    "BoundEngine",
    "BoundTable",
    "DerivationTrace",
    "FactBase",
    "GroupId",
    "Relation",
    "load_fact_base",
    "parse_group",
]
