"""Exact computations in parabolic Hecke algebras of GL_n over Q_p."""

from .errors import (
    ConsistencyError,
    CoverageError,
    DomainError,
    HeckeError,
    InvariantViolation,
    ParseError,
    PropertyFailure,
    ResourceError,
)
from .exact import INFINITY, CoefficientRing, PScaled, Residue, valuation
from .groups import GroupElement, ParabolicDatum
from .cosets import RightCoset, coset_eq, decompose_double_coset
from .hecke import HeckeElement, Pair, hecke_T, hecke_mul

from .levi import fraction_decompose, kernel_test, levi_lift, power_shift, theta

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError", "CoverageError", "DomainError", "HeckeError", "InvariantViolation",
    "ParseError", "PropertyFailure", "ResourceError",
    "INFINITY", "CoefficientRing", "PScaled", "Residue", "valuation",
    "GroupElement", "ParabolicDatum",
    "RightCoset", "coset_eq", "decompose_double_coset",
    "HeckeElement", "Pair", "hecke_T", "hecke_mul",
    "fraction_decompose", "kernel_test", "levi_lift", "power_shift", "theta",
]
