"""Saturation and extremal numbers for two-edge convex geometric hypergraphs."""

from .cyclic import Cgh, canonical_form, complete, is_isomorphic, rotate
from .engine import closure, enumerate_minimum_saturated, ex_exact, is_free, is_saturated, sat_exact
from .patterns import ALL_R2, ALL_R3, M1r, Pattern, classify_pair

__all__ = [
    "ALL_R2",
    "ALL_R3",
    "Cgh",
    "M1r",
    "Pattern",
    "canonical_form",
    "classify_pair",
    "closure",
    "complete",
    "enumerate_minimum_saturated",
    "ex_exact",
    "is_free",
    "is_isomorphic",
    "is_saturated",
    "rotate",
    "sat_exact",
]
