"""
rdlab - exact-arithmetic verification lab for resolvent-degree bounds

Checks the algebraic and geometric inputs behind upper bounds on the
resolvent degree of small symmetric groups and W(E6) in positive
characteristic, and re-derives the bound table from cited facts.

Features:
- Finite fields, multivariate polynomials and projective point sets
- Permutation and classical matrix groups with certified orders
- Registry of reproducible checks with seeded sampling
- Forward-chaining bound engine with replayable derivation traces
- Rich CLI with structured reports
"""

__version__ = "1.0.0"
__author__ = "rdlab developers"

from .core.config import LabConfig
from .core.lab import Laboratory
from .models.report import CheckReport, CheckStatus, RunSummary

__all__ = ["LabConfig", "Laboratory", "CheckReport", "CheckStatus", "RunSummary"]
