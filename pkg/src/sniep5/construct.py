"""Explicit realizing matrices for every accepted spectrum.

Three constructions cover the realizable set in normalized coordinates:

* ``x <= 0``: one positive eigenvalue, realized by repeated rank-one gluing
  of 1x1 zero blocks onto a growing block (:func:`suleimanova_realize`);
* ``x > 0, y <= 0``: the tail {3, 4, 5} is split into two groups, each group
  is realized as above around a shifted Perron root, and the two blocks are
  glued (:func:`loewy_realize`);
* ``x > 0, y > 0``: the closed-form 5x5 family :func:`matrix_B`.

Every matrix is checked against its intended spectrum with the Jacobi solver
in :mod:`sniep5.eig` before it is returned.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import eig
from .config import DEFAULT, Tolerances
from .errors import (
    DegenerateU,
    GluePreconditionError,
    NotRealizable,
    PreconditionError,
    VerificationError,
)
from .region import D_HALF, s3_margin, theorem2_check, theorem3_check
from .spectrum import (
    NormalizedSpectrum,
    Spectrum5,
    denormalize_matrix,
    normalize,
    power_sum,
    validate_and_sort,
)


class Method(str, enum.Enum):
    ZERO = "Zero"
    SULEIMANOVA = "Suleimanova"
    LOEWY = "LoewySplit"
    EXPLICIT_A = "ExplicitA"
    EXPLICIT_B = "ExplicitB"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Partition:
    """Split of the tail indices {3, 4, 5} (1-based, as lambda_3..lambda_5)."""

    K1: frozenset
    K2: frozenset

    def __post_init__(self):
        if self.K1 | self.K2 != {3, 4, 5} or self.K1 & self.K2:
            raise ValueError(f"not a partition of {{3,4,5}}: {set(self.K1)}, {set(self.K2)}")

    def sums(self, n: NormalizedSpectrum) -> tuple[float, float]:
        lam = n.values
        return (math.fsum(lam[i - 1] for i in sorted(self.K1)), math.fsum(lam[i - 1] for i in sorted(self.K2)))


@dataclass(frozen=True)
class Certificate:
    method: Method
    matrix: np.ndarray
    target: Spectrum5
    achieved: tuple
    residual: float

    def to_dict(self) -> dict:
        return {
            "method": str(self.method),
            "matrix": [[float(v) for v in row] for row in self.matrix],
            "target": list(self.target.values),
            "achieved": [float(v) for v in self.achieved],
            "residual": float(self.residual),
        }

    def to_json(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_dict(cls, obj: dict) -> "Certificate":
        m = np.array(obj["matrix"], dtype=float)
        m.setflags(write=False)
        return cls(
            method=Method(obj["method"]),
            matrix=m,
            target=Spectrum5(tuple(float(v) for v in obj["target"])),
            achieved=tuple(float(v) for v in obj["achieved"]),
            residual=float(obj["residual"]),
        )


def _encode(obj):
    if isinstance(obj, float):
        if math.isfinite(obj):
            return float(f"{obj:.17g}")
        return obj
    if isinstance(obj, dict):
        return {k: _encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    return obj


def dumps(obj, indent: int | None = 2) -> str:
    """JSON with floats at 17 significant digits."""
    # repr() of a float is already the shortest round-tripping form (<= 17 digits)
    return json.dumps(_encode(obj), indent=indent, ensure_ascii=False)


# ---------------------------------------------------------------------------
# matrix plumbing


def finalize_matrix(m, tol: Tolerances = DEFAULT, zero_trace: bool = True) -> np.ndarray:
    """Check symmetry, clamp floating-point dust to zero and freeze the array."""
    m = np.array(m, dtype=float, copy=True)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or not 1 <= m.shape[0] <= 5:
        raise VerificationError(f"bad matrix shape {m.shape}")
    if not np.array_equal(m, m.T):
        raise VerificationError("matrix is not exactly symmetric")
    if np.any(m < -tol.tol_entry):
        raise VerificationError(f"negative entry {m.min()!r} below -tol_entry")
    m[m < 0.0] = 0.0
    if zero_trace and abs(float(np.trace(m))) > 5 * tol.tol_entry * max(1.0, float(np.max(np.abs(m)))):
        raise VerificationError(f"trace {np.trace(m)!r} is not zero")
    m.setflags(write=False)
    return m


def _spectrum_residual(m, target) -> float:
    return eig.verify(m, target)


@dataclass(frozen=True)
class _Block:
    """A realized block together with its intended spectrum and Perron pair."""

    matrix: np.ndarray
    spectrum: tuple  # descending; spectrum[0] is the Perron root
    perron: float
    vector: np.ndarray


def _single(value: float) -> _Block:
    return _Block(np.array([[value]]), (value,), value, np.array([1.0]))


def fiedler_glue(
    block_a,
    alpha1: float,
    u,
    block_b,
    beta1: float,
    v,
    eps: float,
    *,
    check: bool = True,
    spectrum_a: Sequence[float] | None = None,
    spectrum_b: Sequence[float] | None = None,
    tol: Tolerances = DEFAULT,
) -> np.ndarray:
    """Join two realizations through the rank-one coupling ``rho * u v^T``.

    With ``rho = sqrt(eps * (alpha1 - beta1 + eps))`` the two Perron roots move
    to ``alpha1 + eps`` and ``beta1 - eps`` and every other eigenvalue of both
    blocks is kept.  When ``check`` is set the glued spectrum is recomputed and
    compared with that prediction.
    """
    if alpha1 < beta1:
        raise GluePreconditionError(f"alpha1={alpha1!r} < beta1={beta1!r}")
    if eps < 0:
        raise GluePreconditionError(f"eps={eps!r} < 0")
    a = np.asarray(block_a, dtype=float)
    b = np.asarray(block_b, dtype=float)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if np.any(u < -tol.tol_entry) or np.any(v < -tol.tol_entry):
        raise GluePreconditionError("Perron vectors must be nonnegative")
    u = np.maximum(u, 0.0)
    v = np.maximum(v, 0.0)
    rho = math.sqrt(eps * (alpha1 - beta1 + eps))
    m, k = a.shape[0], b.shape[0]
    out = np.zeros((m + k, m + k))
    out[:m, :m] = a
    out[m:, m:] = b
    coupling = rho * np.outer(u, v)
    out[:m, m:] = coupling
    out[m:, :m] = coupling.T
    if check:
        sa = list(spectrum_a) if spectrum_a is not None else list(eig.eigenvalues(a))
        sb = list(spectrum_b) if spectrum_b is not None else list(eig.eigenvalues(b))
        sa.remove(max(sa))
        sb.remove(max(sb))
        predicted = [alpha1 + eps, beta1 - eps] + sa + sb
        scale = max(1.0, float(np.max(np.abs(predicted))))
        res = _spectrum_residual(out, predicted)
        if res > tol.tol_eig * scale:
            raise VerificationError(f"glue spectrum off by {res:g}")
    return out


def _glue_blocks(big: _Block, small: _Block, eps: float, tol: Tolerances, check: bool = True) -> _Block:
    if eps < 0.0:
        if eps < -tol.tol_geom:
            raise GluePreconditionError(f"eps={eps!r} < 0")
        eps = 0.0
    mat = fiedler_glue(
        big.matrix,
        big.perron,
        big.vector,
        small.matrix,
        small.perron,
        small.vector,
        eps,
        check=check,
        spectrum_a=big.spectrum,
        spectrum_b=small.spectrum,
        tol=tol,
    )
    rho = math.sqrt(eps * (big.perron - small.perron + eps))
    # the new Perron vector lies in span{(u, 0), (0, v)}: weights (rho, eps)
    nrm = math.hypot(rho, eps)
    cu, cv = (rho / nrm, eps / nrm) if nrm > 0.0 else (1.0, 0.0)
    vec = np.concatenate([cu * big.vector, cv * small.vector])
    spectrum = tuple(sorted((big.perron + eps, small.perron - eps) + big.spectrum[1:] + small.spectrum[1:], reverse=True))
    return _Block(mat, spectrum, big.perron + eps, vec)


def _suleimanova_block(lams: Sequence[float], tol: Tolerances, check: bool = True) -> _Block:
    lams = sorted((float(v) for v in lams), reverse=True)
    if not lams:
        raise PreconditionError("empty spectrum")
    if len(lams) > 1 and lams[1] > tol.tol_geom:
        raise PreconditionError(f"more than one positive eigenvalue: {lams}")
    total = math.fsum(lams)
    if total < -tol.tol_geom:
        raise PreconditionError(f"eigenvalue sum {total!r} < 0")
    block = _single(max(total, 0.0))
    for lam in reversed(lams[1:]):
        block = _glue_blocks(block, _single(0.0), -min(lam, 0.0), tol, check)
    return block


def suleimanova_realize(lams: Sequence[float], tol: Tolerances = DEFAULT) -> np.ndarray:
    """Symmetric nonnegative matrix for one nonnegative and n-1 nonpositive eigenvalues.

    Starts from ``[sum(lams)]`` and absorbs the nonpositive eigenvalues most
    negative first, each through a glue with a 1x1 zero block.
    """
    if len(lams) > 5:
        raise PreconditionError("at most 5 eigenvalues")
    return finalize_matrix(_suleimanova_block(lams, tol).matrix, tol, zero_trace=False)


def loewy_partition_select(n: NormalizedSpectrum, tol: Tolerances = DEFAULT) -> Partition:
    if not (n.x > 0.0 and n.y <= 0.0):
        raise PreconditionError("Loewy split needs x > 0 and y <= 0")
    if n.d <= D_HALF:
        part = Partition(frozenset({3, 5}), frozenset({4}))
    elif n.x > 2.0 * n.d + 1.0:
        part = Partition(frozenset({3, 4}), frozenset({5}))
    else:
        part = Partition(frozenset({5}), frozenset({3, 4}))
    s1, s2 = part.sums(n)
    if not (1.0 + tol.tol_geom >= -s1 and -s1 + tol.tol_geom >= -s2):
        raise PreconditionError(f"partition {sorted(part.K1)}/{sorted(part.K2)} violates 1 >= {-s1} >= {-s2}")
    return part


def loewy_branch(n: NormalizedSpectrum, part: Partition) -> tuple[int, float]:
    """Return (1, eps) when ``lam1 - eps >= lam2 + eps``, else (2, delta)."""
    lam1, lam2 = 1.0, n.x
    eps = lam1 + part.sums(n)[0]
    if lam1 - eps >= lam2 + eps:
        return 1, eps
    return 2, 0.5 * (lam1 - lam2)


def _loewy_block(n: NormalizedSpectrum, part: Partition, tol: Tolerances) -> _Block:
    lam = n.values
    if lam[1] < -tol.tol_geom:
        raise PreconditionError("Loewy split needs lambda2 >= 0")
    k1 = [lam[i - 1] for i in sorted(part.K1)]
    k2 = [lam[i - 1] for i in sorted(part.K2)]
    _, shift = loewy_branch(n, part)
    shift = max(shift, 0.0)
    big = _suleimanova_block([lam[0] - shift] + k1, tol)
    small = _suleimanova_block([lam[1] + shift] + k2, tol)
    if big.perron < small.perron:
        # equal in exact arithmetic on the delta branch
        if small.perron - big.perron > tol.tol_geom:
            raise VerificationError("Loewy blocks out of order")
        small = _Block(small.matrix, small.spectrum, big.perron, small.vector)
    return _glue_blocks(big, small, shift, tol)


def loewy_realize(n: NormalizedSpectrum, part: Partition, tol: Tolerances = DEFAULT) -> np.ndarray:
    m = finalize_matrix(_loewy_block(n, part, tol).matrix, tol)
    res = _spectrum_residual(m, n.values)
    if res > tol.tol_eig:
        raise VerificationError(f"Loewy realization off by {res:g}")
    return m


def _sqrt_nonneg(value: float, what: str, tol: Tolerances) -> float:
    if value < -tol.tol_geom:
        raise PreconditionError(f"{what} = {value!r} < 0")
    return math.sqrt(max(value, 0.0))


def matrix_A(x: float, d: float, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Closed-form realization of ``(1, x, 0, d - x, -d - 1)`` for x on segment OJ."""
    x, d = float(x), float(d)
    if not (D_HALF - tol.tol_geom <= d <= tol.tol_geom):
        raise PreconditionError(f"matrix_A needs d in [-1/2, 0], got {d!r}")
    if not (-tol.tol_geom <= x <= 2.0 * d + 1.0 + tol.tol_geom):
        raise PreconditionError(f"matrix_A needs x in [0, 2d+1], got x={x!r}, d={d!r}")
    f1 = _sqrt_nonneg(0.5 * (x + 1.0) * (d + 1.0 - x), "f1^2", tol)
    g1 = _sqrt_nonneg(x * (x - d), "g1^2", tol)
    m = np.zeros((5, 5))
    for i, j, val in ((0, 2, f1), (0, 4, f1), (1, 4, g1), (2, 3, g1), (2, 4, -d)):
        m[i, j] = m[j, i] = val
    return finalize_matrix(m, tol)


def matrix_B_parts(x: float, y: float, d: float) -> dict:
    """The scalar ingredients of :func:`matrix_B` (no validation)."""
    s3 = 1.0 + x**3 + y**3 + (d - x - y) ** 3 + (-d - 1.0) ** 3
    u2 = 0.5 * ((d - x) * (x + y) + d + 1.0)
    factors = (x + y, x + 1.0, x - d, x - d - 1.0, x + y + 1.0, x + y - d - 1.0)
    v2 = math.prod(factors)
    root = math.sqrt(d * d + 4.0 * (d + 1.0) * x / (x + y)) if x + y > 0 else float("nan")
    return {
        "s3": s3,
        "u2": u2,
        "v2": v2,
        "factors": factors,
        "w1": 0.5 * d + 0.5 * root,
        "w2": 0.5 * d - 0.5 * root,
    }


def matrix_B(x: float, y: float, d: float, tol: Tolerances = DEFAULT) -> np.ndarray:
    """Closed-form realization of ``(1, x, y, d - x - y, -d - 1)`` for y > 0 in triangle OBJ."""
    x, y, d = float(x), float(y), float(d)
    if not (D_HALF < d <= tol.tol_geom):
        raise PreconditionError(f"matrix_B needs d in (-1/2, 0], got {d!r}")
    if y <= 0.0:
        raise PreconditionError("matrix_B needs y > 0")
    if y > x + tol.tol_geom or y > -x + 2.0 * d + 1.0 + tol.tol_geom:
        raise PreconditionError(f"(x, y) = ({x!r}, {y!r}) is outside triangle OBJ for d={d!r}")
    parts = matrix_B_parts(x, y, d)
    s3 = parts["s3"]
    if s3 < 0.0 and float(s3_margin(d, x, y)) < -tol.tol_geom:
        raise PreconditionError(f"s3 = {s3!r} < 0")
    s3 = max(s3, 0.0)
    u2 = parts["u2"]
    if u2 <= tol.tol_entry:
        raise DegenerateU(f"u^2 = {u2!r}")
    u = math.sqrt(u2)
    v = _sqrt_nonneg(parts["v2"], "v^2", tol)
    k = 1.0 / (2.0 * u2)
    m = np.zeros((5, 5))
    entries = (
        (0, 2, u),
        (0, 4, u),
        (1, 3, k * (d + 1.0) * y),
        (1, 4, k * v),
        (2, 3, k * v),
        (2, 4, k * s3 / 3.0),
    )
    for i, j, val in entries:
        m[i, j] = m[j, i] = val
    return finalize_matrix(m, tol)


# ---------------------------------------------------------------------------
# dispatcher


def _zero_certificate(s: Spectrum5) -> Certificate:
    m = np.zeros((5, 5))
    m.setflags(write=False)
    return Certificate(Method.ZERO, m, s, (0.0,) * 5, 0.0)


def select_method(n: NormalizedSpectrum) -> Method:
    if n.x <= 0.0:
        return Method.SULEIMANOVA
    if n.y <= 0.0:
        return Method.LOEWY
    return Method.EXPLICIT_B


def _build_normalized(n: NormalizedSpectrum, method: Method, tol: Tolerances) -> np.ndarray:
    if method is Method.SULEIMANOVA:
        if n.x > tol.tol_geom:
            raise PreconditionError("Suleimanova construction needs x <= 0")
        return finalize_matrix(_suleimanova_block(n.values, tol).matrix, tol)
    if method is Method.LOEWY:
        return loewy_realize(n, loewy_partition_select(n, tol), tol)
    if method is Method.EXPLICIT_B:
        try:
            return matrix_B(n.x, n.y, n.d, tol)
        except DegenerateU:
            # only near J at d ~ 0, where y is within tolerance of the y = 0 edge
            if n.y > tol.tol_geom:
                raise
            edge = NormalizedSpectrum(n.x, 0.0, n.d)
            return loewy_realize(edge, loewy_partition_select(edge, tol), tol)
    if method is Method.EXPLICIT_A:
        if abs(n.y) > tol.tol_geom:
            raise PreconditionError("matrix_A covers y = 0 only")
        return matrix_A(n.x, n.d, tol)
    raise PreconditionError(f"method {method} does not apply to a nonzero spectrum")


def construct(
    s: Spectrum5 | Sequence[float],
    tol: Tolerances = DEFAULT,
    method: Method | str | None = None,
) -> Certificate:
    """Decide realizability and return a verified realizing matrix.

    Raises :class:`NotRealizable` when no matrix exists.  ``method`` forces a
    particular construction (e.g. ``"ExplicitA"`` on segment OJ) instead of the
    default case split on the signs of x and y.
    """
    if not isinstance(s, Spectrum5):
        s = validate_and_sort(s, tol)
    if s.is_zero:
        return _zero_certificate(s)
    n = normalize(s, tol)
    v2 = theorem2_check(n.point, tol)
    v3 = theorem3_check(n, tol)
    if v2.realizable != v3.realizable:
        near = max(abs(v2.margin), abs(v3.margin)) <= 100 * tol.tol_geom
        if not near:
            raise VerificationError(f"criteria disagree at {n}: {v2} vs {v3}")
    if not v2.realizable:
        cond = v3.failed_condition or v2.failed_condition
        raise NotRealizable(f"not realizable: {cond}", cond)
    chosen = select_method(n) if method is None else Method(method)
    m = denormalize_matrix(_build_normalized(n, chosen, tol), n.scale)
    dec = eig.jacobi_eigen(m)
    achieved = tuple(float(v) for v in dec.values)
    residual = float(np.max(np.abs(dec.values - np.array(s.values))))
    if residual > tol.tol_eig * max(1.0, n.scale):
        raise VerificationError(f"{chosen} realization off by {residual:g}")
    return Certificate(chosen, m, s, achieved, residual)
