"""Exact algebra: finite fields, polynomials, projective geometry and groups."""

from .gf import FieldDescriptor, FieldElement, field_of_order, make_field, make_quadratic_extension
from .grouplab import GroupHandle, classical_order
from .mvpoly import MultiPoly
from .projgeom import ProjectivePoint, VarietySystem

__all__ = [
    "FieldDescriptor",
    "FieldElement",
    "GroupHandle",
    "MultiPoly",
    "ProjectivePoint",
    "VarietySystem",
    "classical_order",
    "field_of_order",
    "make_field",
    "make_quadratic_extension",
]
