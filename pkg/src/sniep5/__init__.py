"""Trace-zero symmetric nonnegative inverse eigenvalue problem for 5x5 matrices."""

from .config import DEFAULT, Tolerances
from .construct import Certificate, Method, construct, matrix_A, matrix_B
from .errors import NotRealizable
from .region import theorem2_check, theorem3_check
from .spectrum import NormalizedSpectrum, RegionPoint, Spectrum5, normalize, validate_and_sort

__all__ = [
    "DEFAULT",
    "Certificate",
    "Method",
    "NormalizedSpectrum",
    "NotRealizable",
    "RegionPoint",
    "Spectrum5",
    "Tolerances",
    "construct",
    "matrix_A",
    "matrix_B",
    "normalize",
    "theorem2_check",
    "theorem3_check",
    "validate_and_sort",
]
