"""
TreeSpectra — Symmetric eigensolver.

Householder reduction to tridiagonal form (numpy rank-2 updates) followed by
the implicit-shift QL iteration on the tridiagonal.  The same QL routine
solves the small blocks produced by depth reduction.  Matrices larger than
ORACLE_NATIVE_MAX_N are handed to numpy's LAPACK driver, because the
pure-Python QL sweep is quadratic in interpreted loops.
"""

from __future__ import annotations

import math
from typing import List, Sequence, Tuple

import numpy as np

from common.config import ORACLE_NATIVE_MAX_N, QL_MAX_ITER
from common.errors import EigensolverFailure
from common.logging_util import get_logger

log = get_logger(__name__)


# ── Householder ──────────────────────────────────────────────────────────────

def householder_tridiagonalize(a: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Orthogonally similar tridiagonal form of a symmetric matrix.
    Returns (diag, offdiag); the input is not modified.
    """
    a = np.array(a, dtype=float, copy=True)
    n = a.shape[0]
    for k in range(n - 2):
        u = a[k + 1:, k].copy()
        norm = math.sqrt(float(u @ u))
        if norm == 0.0:
            a[k, k + 1] = 0.0
            continue
        mag = norm if u[0] >= 0.0 else -norm
        u[0] += mag
        h = float(u @ u) / 2.0
        v = (a[k + 1:, k + 1:] @ u) / h
        g = float(u @ v) / (2.0 * h)
        v -= g * u
        a[k + 1:, k + 1:] -= np.outer(v, u) + np.outer(u, v)
        a[k, k + 1] = -mag
    return np.diagonal(a).copy(), np.diagonal(a, 1).copy()


# ── Tridiagonal QL ───────────────────────────────────────────────────────────

def tridiagonal_eigenvalues(
    diag: Sequence[float],
    offdiag: Sequence[float],
    max_iter: int = QL_MAX_ITER,
) -> List[float]:
    """Eigenvalues of the symmetric tridiagonal T(diag, offdiag), ascending."""
    d = [float(x) for x in diag]
    n = len(d)
    if n == 0:
        return []
    e = [float(x) for x in offdiag] + [0.0]
    if len(e) != n:
        raise ValueError(f"offdiag must have length {n - 1}, got {len(e) - 1}")

    # Offdiagonals below eps * ||T|| are zero.  Tree adjacencies leave many
    # zero diagonals next to round-off offdiagonals after Householder.
    eps = float(np.finfo(float).eps)
    floor = eps * _gershgorin_bound(d, e)

    for l in range(n):
        iterations = 0
        while True:
            m = l
            while m < n - 1:
                small = abs(e[m])
                if small <= floor or small <= eps * (abs(d[m]) + abs(d[m + 1])):
                    break
                m += 1
            if m == l:
                break
            if iterations == max_iter:
                log.error("QL iteration stalled at eigenvalue %d", l)
                raise EigensolverFailure(l, iterations)
            iterations += 1

            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    d.sort()
    return d


# ── Dense driver ─────────────────────────────────────────────────────────────

def symmetric_eigenvalues(a: np.ndarray, method: str = "auto") -> np.ndarray:
    """
    All eigenvalues of a symmetric array, ascending.
    method: "native" (Householder + QL), "lapack" (numpy.linalg.eigvalsh) or "auto".

    The native path is backward stable: each returned value lies within a
    small multiple of n * eps * ||A|| of an exact eigenvalue, so on trees of
    up to ORACLE_NATIVE_MAX_N nodes it agrees with LAPACK to 1e-10.  "auto"
    uses it up to that size and LAPACK above it.
    """
    n = a.shape[0]
    if method == "auto":
        method = "native" if n <= ORACLE_NATIVE_MAX_N else "lapack"
    if method == "native":
        diag, off = householder_tridiagonalize(a)
        values = np.asarray(tridiagonal_eigenvalues(diag, off))
    elif method == "lapack":
        values = np.linalg.eigvalsh(a)
    else:
        raise ValueError(f"unknown eigensolver method '{method}'")
    log.debug("Solved %dx%d symmetric matrix with %s path", n, n, method)
    return np.sort(values)
