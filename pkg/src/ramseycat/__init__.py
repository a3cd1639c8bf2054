"""Executable Ramsey degrees for finite categories and classes of finite structures."""

from .core import (INF, Budget, CategoryError, CategoryView, ExtNat, FiniteCategory, LawReport,
                   NotMono, PropertyVerdict, aut, has_amalgamation, is_directed, opposite,
                   subobjects, validate_category)
from .engine import (ArrowQuery, ArrowVerdict, DegreeReport, check_arrow, check_arrow_oracle,
                     degree_bounds, degree_exact_finite)

__version__ = "0.1.0"

__all__ = [
    "INF", "Budget", "CategoryError", "CategoryView", "ExtNat", "FiniteCategory", "LawReport",
    "NotMono", "PropertyVerdict", "aut", "has_amalgamation", "is_directed", "opposite",
    "subobjects", "validate_category", "ArrowQuery", "ArrowVerdict", "DegreeReport",
    "check_arrow", "check_arrow_oracle", "degree_bounds", "degree_exact_finite",
]
