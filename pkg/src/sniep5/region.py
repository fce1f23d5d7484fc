"""Region geometry in (d, x, y) coordinates and the two realizability criteria.

Boundary functions accept scalars or numpy arrays and return the same shape.
Membership is decided through *slacks*: for a set of closed constraints
``g_i(x, y) >= 0`` the slack is ``min_i g_i``, and a point is a member when
``slack >= -tol_geom``.  Every constraint is written in "vertical" form
(a bound on ``y`` or on ``x``), so a slack is an upper bound on the distance
to the boundary piece it measures.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import DomainError
from .spectrum import NormalizedSpectrum, RegionPoint, power_sum

SQRT3 = math.sqrt(3.0)
CBRT4 = float(np.cbrt(4.0))
CBRT2 = float(np.cbrt(2.0))

D_MIN = -0.75
D_HALF = -0.5
# -3/4 + sqrt(5)/4: below it s3 >= 0 on all of OBJ, above it the HI curve appears
D_TRANS = -0.75 + math.sqrt(5.0) / 4.0
D_TRANS_CONJ = -0.75 - math.sqrt(5.0) / 4.0

# eval_r switches to the rationalized form on (R_SWITCH, 0].  The direct form
# already loses ~4e-12 relative accuracy by d = -0.25; at -0.5 it is ~1e-13.
R_SWITCH = -0.5

LABEL_ABC = "ABC"
LABEL_ABFG = "ABFG"
LABEL_P = "P"
LABEL_NONE = "none"


def _out(a, scalar_in):
    if scalar_in:
        return float(a)
    return a


def _prep(*args):
    scalar = all(np.ndim(a) == 0 for a in args)
    arrs = np.broadcast_arrays(*[np.asarray(a, dtype=float) for a in args])
    return scalar, arrs


def _check_domain(d, lo, hi, name, lo_open=False, hi_open=False, slack=0.0):
    d = np.asarray(d)
    bad = np.isnan(d) | (d < lo - slack) | (d > hi + slack)
    if lo_open:
        bad |= d <= lo
    if hi_open:
        bad |= d >= hi
    if np.any(bad):
        bad_vals = np.atleast_1d(d)[np.atleast_1d(bad)][:3]
        lb = "(" if lo_open else "["
        rb = ")" if hi_open else "]"
        raise DomainError(f"{name}: d={bad_vals.tolist()} outside {lb}{lo}, {hi}{rb}")


# ---------------------------------------------------------------------------
# r(d)


def r_direct(d):
    """``4d^3 + 27d^2 + 27d + 3 sqrt(3) sqrt(d^2 (d+1)(8d^2+27d+27))``."""
    d = np.asarray(d, dtype=float)
    rad = d * d * (d + 1.0) * (8.0 * d * d + 27.0 * d + 27.0)
    return 4.0 * d**3 + 27.0 * d**2 + 27.0 * d + 3.0 * SQRT3 * np.sqrt(np.maximum(rad, 0.0))


def r_rational(d):
    """Cancellation-free ``16 d^5 / (4d^2 + 27d + 27 + 3 sqrt(3) sqrt((d+1)(8d^2+27d+27)))``."""
    d = np.asarray(d, dtype=float)
    rad = (d + 1.0) * (8.0 * d * d + 27.0 * d + 27.0)
    den = 4.0 * d * d + 27.0 * d + 27.0 + 3.0 * SQRT3 * np.sqrt(np.maximum(rad, 0.0))
    return 16.0 * d**5 / den


def eval_r(d):
    scalar, (d,) = _prep(d)
    _check_domain(d, -1.0, 0.0, "eval_r")
    out = np.where(d > R_SWITCH, r_rational(d), r_direct(d))
    return _out(out, scalar)


# ---------------------------------------------------------------------------
# cubics of the s3 analysis


def h3(x, d):
    return x**3 + d * x**2 - d * d * x - 4.0 * d - 4.0 * d * d - d**3


def h3_factored(x, d):
    return (x - d) ** 3 + 4.0 * d * (x + 1.0) * (x - d - 1.0)


def h4(x, d):
    return 8.0 * x**3 - 16.0 * d * x**2 + 8.0 * d * d * x + 4.0 * d + 4.0 * d * d


def h5(x, d):
    return -4.0 * (2.0 * d + 1.0) * x**2 + 4.0 * (2.0 * d + 1.0) ** 2 * x - 8.0 * d * d * (d + 1.0)


def _dh3(x, d):
    return 3.0 * x * x + 2.0 * d * x - d * d


def _dh4(x, d):
    return 24.0 * x * x - 32.0 * d * x + 8.0 * d * d


def cubic_diagnostics(x, d):
    """Return ``(h3(x), h4(x), h5(x))`` for the given ``d``."""
    scalar, (x, d) = _prep(x, d)
    return tuple(_out(h(x, d), scalar) for h in (h3, h4, h5))


def _bisect(fn, lo, hi, d, iters=200):
    """Vectorized bisection for increasing ``fn`` with fn(lo) <= 0 <= fn(hi)."""
    lo = np.array(lo, dtype=float, copy=True)
    hi = np.array(hi, dtype=float, copy=True)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if np.all((mid == lo) | (mid == hi)):
            break
        neg = fn(mid, d) <= 0.0
        lo = np.where(neg, mid, lo)
        hi = np.where(neg, hi, mid)
    return 0.5 * (lo + hi)


def _polish(fn, dfn, x0, lo, hi, d, steps=2):
    """Newton-polish a closed-form root inside its bracket [lo, hi].

    Where the closed form is nan or lies outside the bracket by more than 1e-8
    the bisection root is used instead.
    """
    bad = ~np.isfinite(x0) | (x0 < lo - 1e-8) | (x0 > hi + 1e-8)
    x = np.clip(np.where(bad, lo, x0), lo, hi)
    if np.any(bad):
        x = np.where(bad, _bisect(fn, lo, hi, d), x)
    for _ in range(steps):
        fx = fn(x, d)
        dfx = dfn(x, d)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(dfx != 0.0, fx / dfx, 0.0)
        cand = x - step
        better = np.isfinite(cand) & (cand >= lo) & (cand <= hi) & (np.abs(fn(cand, d)) <= np.abs(fx))
        x = np.where(better, cand, x)
    return x


def _f_closed(d, r):
    cr = np.cbrt(r)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (2.0 / 3.0) * d - CBRT4 * d * d / (3.0 * cr) - cr / (3.0 * CBRT4)


def eval_f(d):
    """Vertex H abscissa: the real root of ``h4`` in ``[0, 1]``.

    Defined on ``[-1, 0]``; ``f(0) = 0`` by continuity.
    """
    scalar, (d,) = _prep(d)
    _check_domain(d, -1.0, 0.0, "eval_f")
    r = np.where(d > R_SWITCH, r_rational(d), r_direct(d))
    x0 = _f_closed(d, r)
    lo = np.zeros_like(d)
    hi = np.ones_like(d)
    x = _polish(h4, _dh4, x0, lo, hi, d)
    x = np.where(d == 0.0, 0.0, x)
    return _out(x, scalar)


def eval_x3(d):
    """The single real root of ``h3``, which lies at or below ``d/3``."""
    scalar, (d,) = _prep(d)
    _check_domain(d, -1.0, 0.0, "eval_x3", hi_open=True)
    r = np.where(d > R_SWITCH, r_rational(d), r_direct(d))
    cr = np.cbrt(r)
    with np.errstate(divide="ignore", invalid="ignore"):
        x0 = -d / 3.0 + 2.0 * CBRT4 * d * d / (3.0 * cr) + CBRT2 * cr / 3.0
    lo = np.full_like(d, -2.0)
    hi = d / 3.0
    x = _polish(h3, _dh3, x0, lo, hi, d)
    return _out(x, scalar)


def _g_radicand(d):
    # factored near D_TRANS so g vanishes there exactly; expanded elsewhere (exact g(0))
    near = (d - D_TRANS) * (d - D_TRANS_CONJ)
    far = d * d + 1.5 * d + 0.25
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(d - D_TRANS < 0.05, near, far) / (2.0 * d + 1.0)


def eval_g(d, tol: Tolerances = DEFAULT):
    scalar, (d,) = _prep(d)
    _check_domain(d, D_TRANS, 0.0, "eval_g", slack=tol.tol_geom)
    return _out(np.sqrt(np.maximum(_g_radicand(d), 0.0)), scalar)


def eval_p1_p2(d, tol: Tolerances = DEFAULT):
    """Roots ``d + 1/2 +- g(d)`` of ``h5``."""
    scalar, (d,) = _prep(d)
    g = eval_g(d, tol)
    return _out(d + 0.5 + g, scalar), _out(d + 0.5 - g, scalar)


def _h_radicand(t, d):
    with np.errstate(divide="ignore", invalid="ignore"):
        return h3(t, d) / (t - d)


def _h_unchecked(t, d):
    rad = _h_radicand(t, d)
    with np.errstate(invalid="ignore"):
        val = -0.5 * (t - d) + 0.5 * np.sqrt(np.maximum(rad, 0.0))
    # t = d = 0 is the corner O of the d = 0 triangle, where h vanishes
    return np.where(t - d == 0.0, 0.0, val)


def eval_h(t, d, tol: Tolerances = DEFAULT):
    """Upper root in ``y`` of ``s3(d, t, y) = 0``; traces the curved edge HI."""
    scalar, (t, d) = _prep(t, d)
    corner = (t == 0.0) & (d == 0.0)
    if np.any((t <= d) & ~corner):
        raise DomainError("eval_h requires t > d")
    rad = _h_radicand(t, d)
    if np.any((rad < -tol.tol_geom) & ~corner):
        raise DomainError("eval_h: negative radicand")
    return _out(_h_unchecked(t, d), scalar)


def eval_s3(p: RegionPoint | None = None, *, d=None, x=None, y=None):
    """Third power sum in its quadratic-in-y expansion."""
    if p is not None:
        d, x, y = p.d, p.x, p.y
    scalar, (d, x, y) = _prep(d, x, y)
    out = 3.0 * (d - x) * y * y + 3.0 * (2.0 * d * x - d * d - x * x) * y + 3.0 * (d * x * x - d * d * x - d - d * d)
    return _out(out, scalar)


# ---------------------------------------------------------------------------
# labeled points


@dataclass(frozen=True)
class VertexTable:
    d: float
    points: dict = field(default_factory=dict)

    def __getitem__(self, label: str) -> tuple[float, float]:
        return self.points[label]

    def __contains__(self, label: str) -> bool:
        return label in self.points


def vertices(d: float, tol: Tolerances = DEFAULT) -> VertexTable:
    d = float(d)
    _check_domain(d, D_MIN, 0.0, "vertices")
    pts = {
        "A": (d / 3.0, d / 3.0),
        "B": (d + 0.5, d + 0.5),
        "C": (3.0 * d + 2.0, -d - 1.0),
        "D": (1.0, 2.0 * d),
        "E": (1.0, 0.5 * d - 0.5),
        "F": (d + 1.0, d),
        "G": (d + 1.0, -0.5),
        "J": (2.0 * d + 1.0, 0.0),
        "O": (0.0, 0.0),
    }
    if d >= D_TRANS:
        f = eval_f(d)
        g = eval_g(d, tol)
        pts["H"] = (f, f)
        pts["I"] = (d + 0.5 + g, d + 0.5 - g)
    return VertexTable(d, pts)


# ---------------------------------------------------------------------------
# membership slacks (vectorized)


def slack_abc(d, x, y):
    return np.minimum.reduce([x - y, -x + 2.0 * d + 1.0 - y, y - 0.5 * (d - x)])


def slack_abfg(d, x, y):
    return np.minimum(slack_abc(d, x, y), d + 1.0 - x)


def _arc(d):
    """``(f(d), p1(d))`` for d in the P regime, nan elsewhere."""
    d = np.asarray(d, dtype=float)
    ok = d >= D_TRANS
    dd = np.where(ok, d, 0.0)
    f = eval_f(np.asarray(dd))
    p1 = dd + 0.5 + np.sqrt(np.maximum(_g_radicand(dd), 0.0))
    return np.where(ok, f, np.nan), np.where(ok, p1, np.nan)


def slack_hi(d, x, y, arc=None):
    """``h(x) - y`` over the HI interval ``[f(d), p1(d)]``, +inf elsewhere."""
    f, p1 = _arc(d) if arc is None else arc
    on = (x >= f) & (x <= p1)
    h = _h_unchecked(np.where(on, x, 1.0), np.where(on, d, 0.0))
    return np.where(on, h - y, np.inf)


def slack_p(d, x, y, arc=None):
    return np.minimum(slack_abfg(d, x, y), slack_hi(d, x, y, arc))


def regime(d):
    """0 for the triangle ABC regime, 1 for ABFG, 2 for P (lower regime wins at ties)."""
    d = np.asarray(d, dtype=float)
    return np.where(d <= D_HALF, 0, np.where(d <= D_TRANS, 1, 2))


def region_slack(d, x, y):
    """Signed membership margin of the region prescribed for each d."""
    d, x, y = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (d, x, y)))
    reg = regime(d)
    out = slack_abc(d, x, y)
    out = np.where(reg >= 1, np.minimum(out, d + 1.0 - x), out)
    if np.any(reg == 2):
        out = np.where(reg == 2, np.minimum(out, slack_hi(d, x, y)), out)
    return out


def region_mask(d, x, y, tol: Tolerances = DEFAULT):
    return region_slack(d, x, y) >= -tol.tol_geom


def s3_margin(d, x, y):
    """First-order signed distance from (x, y) to the curve s3 = 0 at fixed d.

    ``s3 / |grad s3|``.  Near the corner O at d = 0 the cubic s3 vanishes to
    third order, so comparing s3 itself with a length tolerance would accept
    points far outside; the gradient scaling keeps both criteria in the same
    units.
    """
    d, x, y = np.broadcast_arrays(*(np.asarray(a, dtype=float) for a in (d, x, y)))
    s3 = eval_s3(d=d, x=x, y=y)
    l4 = d - x - y
    grad = np.hypot(3.0 * (x * x - l4 * l4), 3.0 * (y * y - l4 * l4))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(grad > 0.0, s3 / grad, np.sign(s3) * np.inf)
    return np.where(s3 == 0.0, 0.0, out)


def power_sum_mask(d, x, y, tol: Tolerances = DEFAULT):
    d, x, y = (np.asarray(a, dtype=float) for a in (d, x, y))
    return (s3_margin(d, x, y) >= -tol.tol_geom) & (x - d - 1.0 <= tol.tol_geom)


def ordered_mask(d, x, y):
    """Exact test of ``1 >= x >= y >= d-x-y >= -d-1``."""
    d, x, y = (np.asarray(a, dtype=float) for a in (d, x, y))
    l4 = d - x - y
    return (1.0 >= x) & (x >= y) & (y >= l4) & (l4 >= -d - 1.0)


# ---------------------------------------------------------------------------
# scalar predicates


def _pd(p: RegionPoint, lo: float, name: str, tol: Tolerances):
    _check_domain(p.d, lo, 0.0, name, slack=tol.tol_geom)
    return min(max(float(p.d), lo), 0.0), float(p.x), float(p.y)


def in_triangle_ABC(p: RegionPoint, tol: Tolerances = DEFAULT) -> bool:
    d, x, y = _pd(p, D_MIN, "in_triangle_ABC", tol)
    return bool(slack_abc(d, x, y) >= -tol.tol_geom)


def in_quadrangle_ABFG(p: RegionPoint, tol: Tolerances = DEFAULT) -> bool:
    d, x, y = _pd(p, D_HALF, "in_quadrangle_ABFG", tol)
    return bool(slack_abfg(d, x, y) >= -tol.tol_geom)


def in_shape_P(p: RegionPoint, tol: Tolerances = DEFAULT) -> bool:
    d, x, y = _pd(p, D_TRANS, "in_shape_P", tol)
    d = max(d, D_TRANS)
    return bool(slack_p(d, x, y) >= -tol.tol_geom)


@dataclass(frozen=True)
class Verdict:
    realizable: bool
    region_label: str
    failed_condition: str | None = None
    margin: float = 0.0

    def to_dict(self) -> dict:
        return {
            "realizable": self.realizable,
            "region": self.region_label,
            "failed_condition": self.failed_condition,
        }


_REGIME_LABEL = {0: LABEL_ABC, 1: LABEL_ABFG, 2: LABEL_P}


def _failed_constraint(d, x, y, reg) -> str:
    parts = [
        (x - y, "y <= x (lambda3 <= lambda2)"),
        (-x + 2 * d + 1 - y, "y <= -x + 2d + 1 (lambda4 >= lambda5)"),
        (y - 0.5 * (d - x), "y >= (d - x)/2 (lambda3 >= lambda4)"),
    ]
    if reg >= 1:
        parts.append((d + 1 - x, "x <= d + 1 (lambda2 + lambda5 <= 0)"))
    if reg == 2:
        parts.append((float(slack_hi(d, x, y)), "y <= h(x) (s3 >= 0)"))
    return min(parts, key=lambda t: t[0])[1]


def theorem2_check(p: RegionPoint, tol: Tolerances = DEFAULT) -> Verdict:
    """Membership in triangle ABC, quadrangle ABFG or shape P according to d."""
    d, x, y = _pd(p, D_MIN, "theorem2_check", tol)
    reg = int(regime(d))
    margin = float(region_slack(d, x, y))
    ok = margin >= -tol.tol_geom
    # regime endpoints are shared: both predicates must agree there
    if d == D_HALF or d == D_TRANS:
        other = float(slack_abfg(d, x, y)) if d == D_HALF else float(slack_p(d, x, y))
        other_ok = other >= -tol.tol_geom
        if other_ok != ok and max(abs(margin), abs(other)) > 10 * tol.tol_geom:
            raise AssertionError(f"regime predicates disagree at d={d}, x={x}, y={y}")
    if ok:
        return Verdict(True, _REGIME_LABEL[reg], None, margin)
    return Verdict(False, LABEL_NONE, _failed_constraint(d, x, y, reg), margin)


def theorem3_check(n: NormalizedSpectrum, tol: Tolerances = DEFAULT) -> Verdict:
    """Power-sum criterion: s1 = 0, s3 >= 0 and lambda2 + lambda5 <= 0."""
    s3 = float(s3_margin(n.d, n.x, n.y))
    mn = n.x + (-n.d - 1.0)
    failed = []
    if s3 < -tol.tol_geom:
        failed.append("s3 >= 0")
    if mn > tol.tol_geom:
        failed.append("lambda2 + lambda5 <= 0")
    margin = min(s3, -mn)
    if failed:
        return Verdict(False, LABEL_NONE, " and ".join(failed), margin)
    return Verdict(True, _REGIME_LABEL[int(regime(n.d))], None, margin)


# ---------------------------------------------------------------------------
# boundary polylines


def _dedupe(points, eps=1e-12):
    out = []
    for pt in points:
        if not out or max(abs(pt[0] - out[-1][0]), abs(pt[1] - out[-1][1])) > eps:
            out.append(pt)
    while len(out) > 1 and max(abs(out[0][0] - out[-1][0]), abs(out[0][1] - out[-1][1])) <= eps:
        out.pop()
    return out


def boundary_polyline(d: float, samples: int = 64, tol: Tolerances = DEFAULT) -> list[tuple[float, float]]:
    """Counterclockwise boundary of the realizable (x, y) set for this d.

    The curved edge HI is sampled with ``samples`` points (endpoints included).
    Coincident consecutive vertices are merged, so a degenerate region comes out
    as a single point.
    """
    if samples < 2:
        raise ValueError("samples must be >= 2")
    vt = vertices(d, tol)
    d = vt.d
    reg = int(regime(d))
    if reg == 0:
        pts = [vt["A"], vt["C"], vt["B"]]
    elif reg == 1:
        pts = [vt["A"], vt["G"], vt["F"], vt["B"]]
    else:
        f = vt["H"][0]
        p1 = vt["I"][0]
        # at d = 0 the arc collapses onto the segment JO
        ts = np.linspace(1.0, 0.0, samples if d < 0.0 else 2)
        xs = (1.0 - ts) * f + ts * p1
        ys = _h_unchecked(xs, np.full_like(xs, d))
        # pin the arc ends to the exact vertex values
        arc = [vt["I"]] + list(zip(xs[1:-1].tolist(), ys[1:-1].tolist())) + [vt["H"]]
        pts = [vt["A"], vt["G"], vt["F"]] + arc
    return _dedupe([(float(a), float(b)) for a, b in pts])


def polyline_to_csv(points) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y"])
    for x, y in points:
        w.writerow([repr(float(x)), repr(float(y))])
    return buf.getvalue()


def polyline_to_json(d: float, points, table: VertexTable | None = None) -> dict:
    if table is None:
        table = vertices(d)
    return {
        "d": float(d),
        "vertices": [[float(x), float(y)] for x, y in points],
        "labels": {k: [float(v[0]), float(v[1])] for k, v in table.points.items()},
    }
