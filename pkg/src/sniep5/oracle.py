"""Brute-force ground truth for the region and power-sum claims.

Random numbers come from numpy's PCG64 bit generator.  Doubles are formed
from the raw 64-bit outputs as ``(raw >> 11) * 2**-53``, so a seed gives the
same matrices on every platform and in any language with a PCG64
implementation seeded through numpy's ``SeedSequence``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, Tolerances
from .eig import jacobi_eigvals_batch
from .errors import DomainError
from .region import (
    D_HALF,
    D_MIN,
    D_TRANS,
    ordered_mask,
    slack_p,
    region_slack,
    power_sum_mask,
)
from .spectrum import Spectrum5, power_sums_array

_UPPER = np.triu_indices(5, 1)


@dataclass
class ScanReport:
    claim_id: str
    resolution: int
    max_violation: float
    tolerance: float
    violating_points: list = field(default_factory=list)
    samples: int = 0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violating_points

    def to_dict(self) -> dict:
        return {
            "claim_id": self.claim_id,
            "resolution": self.resolution,
            "samples": self.samples,
            "tolerance": self.tolerance,
            "max_violation": self.max_violation,
            "passed": self.passed,
            "violating_points": self.violating_points,
            "details": self.details,
        }

    @staticmethod
    def merge(reports: list["ScanReport"]) -> "ScanReport":
        first = reports[0]
        pts = [p for r in reports for p in r.violating_points]
        return ScanReport(
            claim_id=first.claim_id,
            resolution=sum(r.resolution for r in reports),
            max_violation=max(r.max_violation for r in reports),
            tolerance=first.tolerance,
            violating_points=pts,
            samples=sum(r.samples for r in reports),
            details={"shards": len(reports)},
        )


# ---------------------------------------------------------------------------
# random numbers


def uniform_doubles(seed: int, count: int) -> np.ndarray:
    """``count`` doubles in [0, 1) from PCG64(seed)."""
    raw = np.random.PCG64(seed).random_raw(count)
    return (raw >> np.uint64(11)).astype(np.float64) * (2.0**-53)


def random_realizable_matrix(seed: int) -> np.ndarray:
    """Zero-diagonal symmetric 5x5 matrix with i.i.d. U[0, 1) off-diagonal entries.

    Entries fill the strict upper triangle in row-major order.
    """
    m = np.zeros((5, 5))
    m[_UPPER] = uniform_doubles(seed, 10)
    m = m + m.T
    m.setflags(write=False)
    return m


def _random_matrices(seeds) -> np.ndarray:
    out = np.zeros((len(seeds), 5, 5))
    for k, s in enumerate(seeds):
        out[k][_UPPER] = uniform_doubles(int(s), 10)
    return out + out.transpose(0, 2, 1)


def normalized_coords(vals: np.ndarray):
    """(d, x, y) arrays from descending eigenvalue rows with positive lambda1."""
    lam1 = vals[:, 0]
    x = vals[:, 1] / lam1
    y = vals[:, 2] / lam1
    d = (vals[:, 1] + vals[:, 2] + vals[:, 3]) / lam1
    return d, x, y


# ---------------------------------------------------------------------------
# Monte Carlo necessity


def _mc_shard(args) -> ScanReport:
    start, stop, tol = args
    mats = _random_matrices(range(start, stop))
    vals = jacobi_eigvals_batch(mats)
    d, x, y = normalized_coords(vals)
    lam5 = vals[:, 4] / vals[:, 0]
    s3 = power_sums_array(d, x, y, 3)
    slack2 = region_slack(np.clip(d, D_MIN, 0.0), x, y)
    ok3 = power_sum_mask(d, x, y, tol)
    viol = np.maximum.reduce([
        -slack2,
        -s3,
        x + lam5,
        lam5 + 0.25,  # lambda5 <= -1/4 after normalization
        -1.0 - lam5,  # Perron dominance
        np.zeros_like(d),
    ])
    bad = (viol > tol.tol_geom) | ~ok3
    pts = [
        {"seed": int(start + i), "d": float(d[i]), "x": float(x[i]), "y": float(y[i]), "violation": float(viol[i])}
        for i in np.flatnonzero(bad)[:50]
    ]
    return ScanReport(
        claim_id="mc_necessity",
        resolution=stop - start,
        max_violation=float(np.max(viol)) if len(viol) else 0.0,
        tolerance=tol.tol_geom,
        violating_points=pts,
        samples=stop - start,
    )


def mc_necessity(trials: int, seed: int, workers: int = 1, chunk: int = 20000, tol: Tolerances = DEFAULT) -> ScanReport:
    """Random nonnegative matrices must land inside both realizable sets.

    Trial ``i`` uses the matrix of seed ``seed + i``; shards are disjoint seed
    ranges and merge by maximum violation.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    bounds = [(s, min(s + chunk, seed + trials), tol) for s in range(seed, seed + trials, chunk)]
    if workers > 1 and len(bounds) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            reports = list(ex.map(_mc_shard, bounds))
    else:
        reports = [_mc_shard(b) for b in bounds]
    rep = ScanReport.merge(reports)
    rep.resolution = trials
    rep.details = {"seed": seed, "trials": trials, "generator": "PCG64 raw>>11 * 2^-53"}
    return rep


# ---------------------------------------------------------------------------
# triangle OBJ grid


def obj_grid(d: float, resolution: int):
    """Barycentric grid on triangle O, B, J; returns (x, y, i, j) arrays."""
    i, j = np.meshgrid(np.arange(resolution + 1), np.arange(resolution + 1), indexing="ij")
    keep = i + j <= resolution
    i, j = i[keep], j[keep]
    b = d + 0.5
    jx = 2.0 * d + 1.0
    x = (i * b + j * jx) / resolution
    y = (i * b) / resolution
    return x, y, i, j


def _obj_cell(d: float, resolution: int) -> float:
    # longest edge of OBJ over the grid resolution
    b = d + 0.5
    edges = (math.hypot(b, b), 2.0 * d + 1.0, math.hypot(d + 0.5, d + 0.5))
    return max(edges) / resolution


def extrema_table(d: float, k: int) -> dict:
    """Closed-form extrema of s_k over triangle OBJ and where they occur."""
    at_o = 1.0 + d**k + (-d - 1.0) ** k
    at_b = 1.0 + 2.0 * (d + 0.5) ** k + 2.0 * (-d - 1.0) ** k
    at_j = 1.0 + (2.0 * d + 1.0) ** k + 2.0 * (-d - 1.0) ** k
    o, b, j = (0.0, 0.0), (d + 0.5, d + 0.5), (2.0 * d + 1.0, 0.0)
    if k % 2 == 0:
        return {"min": (o, at_o), "max": (j, at_j)}
    return {"min": (b, at_b), "max": (o, at_o)}


def grid_scan_lemma1(d: float, k: int, resolution: int = 200, value_tol: float = 1e-6) -> ScanReport:
    """Compare the empirical extrema of s_k on the OBJ grid with the table.

    The table's extremal points are grid nodes, so no discretization term is
    added to ``value_tol``.  A location mismatch beyond two grid cells is
    excused only when the table point attains the same extreme value (a tie).
    """
    if not (D_HALF <= d <= 0.0):
        raise DomainError(f"grid_scan_lemma1: d={d} outside [-1/2, 0]")
    if k < 2 or resolution < 50:
        raise DomainError("grid_scan_lemma1 needs k >= 2 and resolution >= 50")
    x, y, _, _ = obj_grid(d, resolution)
    dd = np.full_like(x, d)
    sk = power_sums_array(dd, x, y, k)
    table = extrema_table(d, k)
    cell = _obj_cell(d, resolution)
    viol = []
    worst = 0.0
    for kind, pick in (("min", np.argmin), ("max", np.argmax)):
        (tx, ty), tval = table[kind]
        idx = int(pick(sk))
        emp = float(sk[idx])
        gap = abs(emp - tval)
        worst = max(worst, gap)
        at_table = float(power_sums_array(d, tx, ty, k))
        dist = math.hypot(x[idx] - tx, y[idx] - ty)
        tie = abs(at_table - emp) <= value_tol
        if gap > value_tol or (dist > 2.0 * cell + 1e-15 and not tie):
            viol.append({"kind": kind, "empirical": emp, "table": tval, "at": [float(x[idx]), float(y[idx])], "expected_at": [tx, ty]})
    return ScanReport(
        claim_id=f"power-sum extrema (k={k}, d={d})",
        resolution=resolution,
        max_violation=worst,
        tolerance=value_tol,
        violating_points=viol,
        samples=len(x),
        details={"table": {k_: [list(v[0]), v[1]] for k_, v in table.items()}},
    )


def grid_scan_lemma2(d: float, resolution: int = 300, tol: Tolerances = DEFAULT) -> ScanReport:
    """Sign of s3 on the OBJ grid against the region OHIJ.

    For d <= D_TRANS every grid point needs s3 >= 0.  Above it, s3 >= 0 must
    coincide with membership in shape P; disagreements within two grid cells of
    the curve y = h(x) are tolerated.
    """
    if not (D_HALF <= d <= 0.0):
        raise DomainError(f"grid_scan_lemma2: d={d} outside [-1/2, 0]")
    if resolution < 50:
        raise DomainError("grid_scan_lemma2 needs resolution >= 50")
    x, y, _, _ = obj_grid(d, resolution)
    dd = np.full_like(x, d)
    s3 = power_sums_array(dd, x, y, 3)
    nonneg = s3 >= -tol.tol_geom
    band = 2.0 * _obj_cell(d, resolution)
    if d <= D_TRANS:
        bad = ~nonneg
        worst = float(max(0.0, -s3.min()))
        inside = np.ones_like(nonneg)
    else:
        slack = slack_p(dd, x, y)
        inside = slack >= -tol.tol_geom
        bad = (nonneg != inside) & (np.abs(slack) > band)
        worst = float(np.max(np.abs(s3[nonneg != inside]), initial=0.0))
    pts = [{"x": float(x[i]), "y": float(y[i]), "s3": float(s3[i])} for i in np.flatnonzero(bad)[:50]]
    return ScanReport(
        claim_id=f"s3 sign law (d={d})",
        resolution=resolution,
        max_violation=worst,
        tolerance=band,
        violating_points=pts,
        samples=len(x),
        details={"nonnegative": int(nonneg.sum()), "inside": int(np.sum(inside))},
    )


# ---------------------------------------------------------------------------
# agreement of the region test and the power-sum test


def ordered_box(d: float):
    """Bounding box ``(x_lo, x_hi, y_lo, y_hi)`` of the ordered region for d."""
    x_lo = d / 3.0
    x_hi = min(1.0, 3.0 * d + 2.0)
    y_lo = -d - 1.0 if d <= -1.0 / 3.0 else 0.5 * d - 0.5
    y_hi = d + 0.5
    return x_lo, x_hi, y_lo, y_hi


def _compare(d, x, y, band, tol):
    ordered = ordered_mask(d, x, y)
    slack = region_slack(d, x, y)
    t2 = slack >= -tol.tol_geom
    t3 = power_sum_mask(d, x, y, tol)
    disagree = ordered & (t2 != t3)
    bad = disagree & (np.abs(slack) > band)
    return ordered, disagree, bad, slack


def scan_equivalence_grid(n_xy: int = 300, n_d: int = 60, band: float = 1e-6, tol: Tolerances = DEFAULT) -> ScanReport:
    """Both criteria on an n_xy x n_xy grid over each d's ordered box."""
    ds = np.linspace(D_MIN, 0.0, n_d)
    checked = disagreements = 0
    worst = 0.0
    pts = []
    for d in ds:
        x_lo, x_hi, y_lo, y_hi = ordered_box(float(d))
        xs = np.linspace(x_lo, x_hi, n_xy)
        ys = np.linspace(y_lo, y_hi, n_xy)
        x, y = np.meshgrid(xs, ys, indexing="ij")
        x, y = x.ravel(), y.ravel()
        dd = np.full_like(x, d)
        ordered, disagree, bad, slack = _compare(dd, x, y, band, tol)
        checked += int(ordered.sum())
        disagreements += int(disagree.sum())
        if np.any(disagree):
            worst = max(worst, float(np.max(np.abs(slack[disagree]))))
        for i in np.flatnonzero(bad)[: max(0, 50 - len(pts))]:
            pts.append({"d": float(d), "x": float(x[i]), "y": float(y[i]), "slack": float(slack[i])})
    return ScanReport(
        claim_id="region <=> power-sum criterion (grid)",
        resolution=n_xy,
        max_violation=worst,
        tolerance=band,
        violating_points=pts,
        samples=checked,
        details={"d_values": n_d, "boundary_disagreements": disagreements},
    )


def random_ordered_points(count: int, seed: int):
    """``count`` uniformly drawn (d, x, y) with an ordered normalized tuple."""
    gen = np.random.Generator(np.random.PCG64(seed))
    ds, xs, ys = [], [], []
    have = 0
    while have < count:
        m = 4 * (count - have) + 64
        d = gen.uniform(D_MIN, 0.0, m)
        x_lo = d / 3.0
        x_hi = np.minimum(1.0, 3.0 * d + 2.0)
        y_lo = np.where(d <= -1.0 / 3.0, -d - 1.0, 0.5 * d - 0.5)
        y_hi = d + 0.5
        x = x_lo + (x_hi - x_lo) * gen.random(m)
        y = y_lo + (y_hi - y_lo) * gen.random(m)
        keep = ordered_mask(d, x, y)
        ds.append(d[keep])
        xs.append(x[keep])
        ys.append(y[keep])
        have += int(keep.sum())
    return tuple(np.concatenate(a)[:count] for a in (ds, xs, ys))


def scan_equivalence_random(count: int = 100_000, seed: int = 2009, band: float = 1e-6, tol: Tolerances = DEFAULT) -> ScanReport:
    d, x, y = random_ordered_points(count, seed)
    ordered, disagree, bad, slack = _compare(d, x, y, band, tol)
    pts = [{"d": float(d[i]), "x": float(x[i]), "y": float(y[i]), "slack": float(slack[i])} for i in np.flatnonzero(bad)[:50]]
    return ScanReport(
        claim_id="region <=> power-sum criterion (random)",
        resolution=count,
        max_violation=float(np.max(np.abs(slack[disagree]), initial=0.0)),
        tolerance=band,
        violating_points=pts,
        samples=int(ordered.sum()),
        details={"seed": seed, "boundary_disagreements": int(disagree.sum())},
    )


# ---------------------------------------------------------------------------
# realizable spectra corpus


def _spectrum(d, x, y, scale, perm) -> Spectrum5:
    vals = np.array([1.0, x, y, d - x - y, -d - 1.0]) * scale
    return Spectrum5(tuple(float(v) for v in vals[perm]))


def realizable_corpus(counts: dict, seed: int = 5) -> list[tuple[list[float], str | None]]:
    """Random realizable spectra per construction case.

    ``counts`` maps a method name (``"Zero"``, ``"Suleimanova"``,
    ``"LoewySplit"``, ``"ExplicitA"``, ``"ExplicitB"``) to how many spectra to
    draw.  Each entry is ``(eigenvalues, forced_method)``: ``forced_method`` is
    ``"ExplicitA"`` for the segment OJ samples (which the default dispatch
    routes to the Loewy split) and ``None`` otherwise.  Eigenvalues are scaled
    by a log-uniform factor in [1/4, 4] and shuffled.
    """
    gen = np.random.Generator(np.random.PCG64(seed))
    out: list[tuple[list[float], str | None]] = []

    def emit(d, x, y, forced=None):
        scale = float(np.exp(gen.uniform(math.log(0.25), math.log(4.0))))
        perm = gen.permutation(5)
        out.append((list(_spectrum(d, x, y, scale, perm).values), forced))

    def draw(n, d_lo, d_hi, x_box, y_box, accept):
        got = 0
        while got < n:
            d = float(gen.uniform(d_lo, d_hi))
            x_lo, x_hi = x_box(d)
            y_lo, y_hi = y_box(d)
            if x_hi <= x_lo or y_hi <= y_lo:
                continue
            x = float(gen.uniform(x_lo, x_hi))
            y = float(gen.uniform(y_lo, y_hi))
            if accept(d, x, y) and float(region_slack(d, x, y)) > 1e-7:
                emit(d, x, y)
                got += 1

    for _ in range(counts.get("Zero", 0)):
        out.append(([0.0] * 5, None))
    box = ordered_box
    draw(
        counts.get("Suleimanova", 0), D_MIN, 0.0,
        lambda d: (box(d)[0], 0.0), lambda d: box(d)[2:],
        lambda d, x, y: x < 0.0,
    )
    draw(
        counts.get("LoewySplit", 0), -2.0 / 3.0, 0.0,
        lambda d: (0.0, box(d)[1]), lambda d: (box(d)[2], 0.0),
        lambda d, x, y: x > 0.0 and y < 0.0,
    )
    draw(
        counts.get("ExplicitB", 0), D_HALF, 0.0,
        lambda d: (0.0, 2.0 * d + 1.0), lambda d: (0.0, d + 0.5),
        lambda d, x, y: x > 0.0 and y > 0.0,
    )
    for _ in range(counts.get("ExplicitA", 0)):
        d = float(gen.uniform(D_HALF, 0.0))
        x = float(gen.uniform(0.0, 2.0 * d + 1.0))
        scale = float(np.exp(gen.uniform(math.log(0.25), math.log(4.0))))
        perm = gen.permutation(5)
        out.append((list(_spectrum(d, x, 0.0, scale, perm).values), "ExplicitA"))
    return out
