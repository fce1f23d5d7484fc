"""Cyclic Jacobi eigensolver for small symmetric matrices.

The single-matrix solver runs on plain Python floats: for orders up to 5 this
is faster than dispatching numpy per rotation, and it makes results
bit-reproducible.  :func:`jacobi_eigvals_batch` applies the same rotations to
a stack of matrices at once and is used by the Monte Carlo oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import NoConvergence, NotPerronLike

MAX_SWEEPS = 50
OFF_TOL = 1e-14
SKIP_BELOW = 1e-300


@dataclass(frozen=True)
class EigenDecomposition:
    values: np.ndarray  # descending
    vectors: np.ndarray  # column i pairs with values[i]
    sweeps: int = 0


def _rotation(app: float, aqq: float, apq: float) -> tuple[float, float]:
    theta = (aqq - app) / (2.0 * apq)
    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    return c, t * c


def jacobi_eigen(m, tol: float = OFF_TOL, max_sweeps: int = MAX_SWEEPS) -> EigenDecomposition:
    a = [list(map(float, row)) for row in np.asarray(m, dtype=float)]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    for i in range(n):
        for j in range(i):
            if a[i][j] != a[j][i]:
                raise ValueError("matrix must be exactly symmetric")
    v = [[1.0 if i == j else 0.0 for j in range(n)] for i in range(n)]
    fro = math.sqrt(math.fsum(x * x for row in a for x in row))
    sweeps = 0
    if fro > 0.0:
        while True:
            off = math.sqrt(math.fsum(2.0 * a[p][q] ** 2 for p in range(n) for q in range(p + 1, n)))
            if off <= tol * fro:
                break
            if sweeps >= max_sweeps:
                raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps (off={off:g})")
            sweeps += 1
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p][q]
                    if abs(apq) < SKIP_BELOW:
                        continue
                    c, s = _rotation(a[p][p], a[q][q], apq)
                    for k in range(n):
                        akp, akq = a[k][p], a[k][q]
                        a[k][p] = c * akp - s * akq
                        a[k][q] = s * akp + c * akq
                    for k in range(n):
                        apk, aqk = a[p][k], a[q][k]
                        a[p][k] = c * apk - s * aqk
                        a[q][k] = s * apk + c * aqk
                    a[p][q] = a[q][p] = 0.0
                    for k in range(n):
                        vkp, vkq = v[k][p], v[k][q]
                        v[k][p] = c * vkp - s * vkq
                        v[k][q] = s * vkp + c * vkq
    diag = [a[i][i] for i in range(n)]
    # stable sort: ties keep the lowest column first
    order = sorted(range(n), key=lambda i: -diag[i])
    values = np.array([diag[i] for i in order])
    vectors = np.array([[v[k][i] for i in order] for k in range(n)]).reshape(n, n)
    return EigenDecomposition(values, vectors, sweeps)


def eigenvalues(m) -> np.ndarray:
    return jacobi_eigen(m).values


def perron_vector(m, tie_tol: float = 1e-10, clamp: float = 1e-12) -> tuple[float, np.ndarray]:
    """Largest eigenvalue and a unit eigenvector with nonnegative entries.

    With a repeated top eigenvalue every candidate column is tried in order and
    the first one that sign-normalizes to a nonnegative vector is returned.
    """
    m = np.asarray(m, dtype=float)
    if np.any(m < 0.0):
        raise ValueError("perron_vector needs an entrywise nonnegative matrix")
    dec = jacobi_eigen(m)
    top = dec.values[0]
    scale = max(1.0, float(np.max(np.abs(m))) if m.size else 1.0)
    for i in range(len(dec.values)):
        if top - dec.values[i] > tie_tol * scale:
            break
        vec = dec.vectors[:, i].copy()
        j = int(np.argmax(np.abs(vec)))
        if vec[j] < 0.0:
            vec = -vec
        vec[np.abs(vec) < clamp] = 0.0
        if np.all(vec >= 0.0):
            return float(top), vec / np.linalg.norm(vec)
    raise NotPerronLike("no nonnegative eigenvector for the largest eigenvalue")


def verify(m, target: Sequence[float]) -> float:
    """Max deviation between the sorted eigenvalues of ``m`` and ``target``."""
    vals = jacobi_eigen(m).values
    tgt = np.sort(np.asarray(list(target), dtype=float))[::-1]
    if len(tgt) != len(vals):
        raise ValueError("target length does not match matrix order")
    return float(np.max(np.abs(vals - tgt))) if len(vals) else 0.0


def jacobi_eigvals_batch(ms, tol: float = OFF_TOL, max_sweeps: int = MAX_SWEEPS) -> np.ndarray:
    """Eigenvalues (descending) of a stack of symmetric matrices, shape (N, n, n)."""
    a = np.array(ms, dtype=float, copy=True)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError("expected an array of shape (N, n, n)")
    n = a.shape[1]
    fro = np.sqrt(np.einsum("kij,kij->k", a, a))
    iu = np.triu_indices(n, 1)
    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * np.sum(a[:, iu[0], iu[1]] ** 2, axis=1))
        if np.all(off <= tol * fro):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[:, p, q]
                act = np.abs(apq) >= SKIP_BELOW
                if not np.any(act):
                    continue
                safe = np.where(act, apq, 1.0)
                theta = (a[:, q, q] - a[:, p, p]) / (2.0 * safe)
                with np.errstate(over="ignore"):
                    # theta**2 -> inf gives t = 0, the correct limit
                    t = np.copysign(1.0, theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                c = np.where(act, 1.0 / np.sqrt(t * t + 1.0), 1.0)
                s = np.where(act, t * c, 0.0)
                cp = c[:, None]
                sp = s[:, None]
                colp = a[:, :, p].copy()
                colq = a[:, :, q].copy()
                a[:, :, p] = cp * colp - sp * colq
                a[:, :, q] = sp * colp + cp * colq
                rowp = a[:, p, :].copy()
                rowq = a[:, q, :].copy()
                a[:, p, :] = cp * rowp - sp * rowq
                a[:, q, :] = sp * rowp + cp * rowq
                a[:, p, q] = np.where(act, 0.0, a[:, p, q])
                a[:, q, p] = a[:, p, q]
    else:
        off = np.sqrt(2.0 * np.sum(a[:, iu[0], iu[1]] ** 2, axis=1))
        if np.any(off > tol * fro):
            raise NoConvergence("batched Jacobi did not converge")
    vals = np.diagonal(a, axis1=1, axis2=2)
    return -np.sort(-vals, axis=1)
