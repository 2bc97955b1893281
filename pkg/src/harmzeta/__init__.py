"""Exact and numeric verification of generating-series identities for harmonic q-MZVs."""

from .algebra import AlgebraElement, harmonic_mul, make_e, make_g, make_phi, parse_element, psi, render
from .exact import LaurentPoly, RatSeries
from .report import VerificationReport

__all__ = [
    "AlgebraElement",
    "LaurentPoly",
    "RatSeries",
    "VerificationReport",
    "harmonic_mul",
    "make_e",
    "make_g",
    "make_phi",
    "parse_element",
    "psi",
    "render",
]
