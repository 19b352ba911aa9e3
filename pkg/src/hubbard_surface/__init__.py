"""Bethe-ansatz toolkit for the open Hubbard chain with boundary magnetic fields."""
from .model import (
    BoundaryClass,
    CriticalLineError,
    DerivedConstants,
    ModelParams,
    Region,
    boundary_string_values,
    classify_region,
    constants_from_magnitudes,
    critical_field,
    derive_constants,
)

__all__ = [
    "BoundaryClass",
    "CriticalLineError",
    "DerivedConstants",
    "ModelParams",
    "Region",
    "boundary_string_values",
    "classify_region",
    "constants_from_magnitudes",
    "critical_field",
    "derive_constants",
]
