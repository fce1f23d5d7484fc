"""Numerical tolerances shared by every module."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Closure margins for the exact inequalities of the region geometry.

    ``tol_sum`` is relative to ``max(1, |lambda_1|)``.
    """

    tol_sum: float = 1e-12
    tol_geom: float = 1e-9
    tol_entry: float = 1e-12
    tol_eig: float = 1e-8


DEFAULT = Tolerances()
