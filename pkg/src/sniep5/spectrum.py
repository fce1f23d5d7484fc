"""Input validation, normalization and (d, x, y) coordinates.

A trace-zero spectrum with Perron root ``lam1 > 0`` is divided by ``lam1`` and
written as ``(1, x, y, d - x - y, -d - 1)`` where ``d = lam2 + lam3 + lam4``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import (
    NonFinite,
    NonPositiveLeading,
    NonZeroTrace,
    NotOrdered,
    NotPerronDominant,
)


@dataclass(frozen=True)
class Spectrum5:
    values: tuple[float, float, float, float, float]

    def __iter__(self):
        return iter(self.values)

    @property
    def is_zero(self) -> bool:
        return all(v == 0.0 for v in self.values)


@dataclass(frozen=True)
class RegionPoint:
    d: float
    x: float
    y: float


@dataclass(frozen=True)
class NormalizedSpectrum:
    x: float
    y: float
    d: float
    scale: float = 1.0

    @property
    def values(self) -> tuple[float, float, float, float, float]:
        return (1.0, self.x, self.y, self.d - self.x - self.y, -self.d - 1.0)

    @property
    def point(self) -> RegionPoint:
        return RegionPoint(self.d, self.x, self.y)

    def to_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "d": self.d, "scale": self.scale}


def validate_and_sort(raw: Sequence[float], tol: Tolerances = DEFAULT) -> Spectrum5:
    vals = [float(v) for v in raw]
    if len(vals) != 5:
        raise ValueError(f"expected 5 eigenvalues, got {len(vals)}")
    if not all(math.isfinite(v) for v in vals):
        raise NonFinite(f"non-finite eigenvalue in {vals}")
    vals.sort(reverse=True)
    total = math.fsum(vals)
    if abs(total) > tol.tol_sum * max(1.0, abs(vals[0])):
        raise NonZeroTrace(f"trace ≠ 0: eigenvalues sum to {total!r}")
    return Spectrum5(tuple(vals))


def normalize(s: Spectrum5, tol: Tolerances = DEFAULT) -> NormalizedSpectrum:
    lam = s.values
    if lam[0] <= 0.0:
        # with a zero sum this only happens for the zero spectrum
        raise NonPositiveLeading("largest eigenvalue must be positive", "lambda1 > 0")
    if -lam[4] > lam[0] * (1.0 + tol.tol_sum):
        raise NotPerronDominant(
            f"|lambda5| = {-lam[4]!r} exceeds lambda1 = {lam[0]!r}",
            "|lambda5| <= lambda1",
        )
    scale = lam[0]
    x = lam[1] / scale
    y = lam[2] / scale
    d = (lam[1] + lam[2] + lam[3]) / scale
    return NormalizedSpectrum(x=x, y=y, d=d, scale=scale)


def to_region_point(n: NormalizedSpectrum) -> RegionPoint:
    return n.point


def power_sum(n: NormalizedSpectrum, k: int) -> float:
    """k-th power sum ``1 + x^k + y^k + (d-x-y)^k + (-d-1)^k``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return math.fsum(v**k for v in n.values)


def power_sums_array(d, x, y, k: int):
    """Vectorized power sum over arrays of region coordinates."""
    d, x, y = np.asarray(d, float), np.asarray(x, float), np.asarray(y, float)
    return 1.0 + x**k + y**k + (d - x - y) ** k + (-d - 1.0) ** k


def is_ordered(values: Sequence[float], slack: float = 0.0) -> bool:
    return all(values[i] + slack >= values[i + 1] for i in range(len(values) - 1))


def from_region_point(p: RegionPoint, tol: Tolerances = DEFAULT) -> NormalizedSpectrum:
    n = NormalizedSpectrum(x=float(p.x), y=float(p.y), d=float(p.d), scale=1.0)
    if not is_ordered(n.values, tol.tol_geom):
        raise NotOrdered(f"(1, x, y, d-x-y, -d-1) = {n.values} is not non-increasing")
    return n


def denormalize_matrix(m: np.ndarray, scale: float) -> np.ndarray:
    out = np.asarray(m, dtype=float) * float(scale)
    out.setflags(write=False)
    return out


def spectrum_to_dict(s: Spectrum5) -> dict:
    return {"eigenvalues": list(s.values)}


def spectrum_from_dict(obj: dict, tol: Tolerances = DEFAULT) -> Spectrum5:
    return validate_and_sort(obj["eigenvalues"], tol)
