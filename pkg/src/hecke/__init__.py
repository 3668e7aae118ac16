"""Exact computation in Hecke triangle groups and their trace fields."""

from .field import FieldContext, FieldElement, UndeterminedError, build_field_context, sqrt_in_field
from .group import INF, GroupMatrix, classify, mobius_apply, st_product
from .rosen import CFExpansion, Status, expand, orbit_label, validate_period
from .expr import parse_element

__all__ = [
    "FieldContext", "FieldElement", "UndeterminedError", "build_field_context", "sqrt_in_field",
    "INF", "GroupMatrix", "classify", "mobius_apply", "st_product",
    "CFExpansion", "Status", "expand", "orbit_label", "validate_period", "parse_element",
]
