"""Symmetric tridiagonal eigenvalues by Sturm-sequence bisection.

The count of eigenvalues below a shift ``x`` is the number of negative
pivots in the LDL^T factorization of ``T - x I``.  Counts are vectorized
over many shifts at once, so all eigenvalues in a window are bisected
simultaneously.
"""

from __future__ import annotations

import numpy as np


def as_tridiagonal(matrix):
    """Return ``(d, e)`` from a dense symmetric tridiagonal matrix or a ``(d, e)`` pair."""
    if isinstance(matrix, tuple) and len(matrix) == 2:
        d, e = (np.asarray(v, dtype=float) for v in matrix)
        if e.size != max(d.size - 1, 0):
            raise ValueError("off-diagonal must have length len(d) - 1")
        return d, e
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("matrix must be square")
    if not np.allclose(m, m.T, rtol=0, atol=0):
        raise ValueError("matrix must be symmetric")
    if np.any(np.triu(m, 2)) or np.any(np.tril(m, -2)):
        raise ValueError("matrix must be tridiagonal")
    return np.diag(m).copy(), np.diag(m, 1).copy()


def gershgorin(d, e):
    r = np.zeros_like(d)
    if e.size:
        r[:-1] += np.abs(e)
        r[1:] += np.abs(e)
    return float(np.min(d - r)), float(np.max(d + r))


def _pivot_floor(d, e2):
    scale = max(1.0, float(np.max(np.abs(d))) if d.size else 1.0, float(np.sqrt(e2.max())) if e2.size else 0.0)
    return np.finfo(float).eps * scale


def sturm_count(d, e, shifts):
    """Number of eigenvalues strictly below each shift.

    A zero pivot is replaced by a tiny positive one, so a shift equal to an
    eigenvalue does not count it.
    """
    shifts = np.atleast_1d(np.asarray(shifts, dtype=float))
    d = np.asarray(d, dtype=float)
    e2 = np.asarray(e, dtype=float) ** 2
    tiny = _pivot_floor(d, e2)
    if shifts.size <= 4:
        # plain floats beat numpy per-row overhead for a handful of shifts
        dl, el = d.tolist(), e2.tolist()
        return np.array([_count_one(dl, el, float(x), tiny) for x in shifts], dtype=np.int64)
    count = np.zeros(shifts.shape, dtype=np.int64)
    q = d[0] - shifts
    q = np.where(q == 0.0, tiny, q)
    count += q < 0
    for i in range(1, d.size):
        q = (d[i] - shifts) - e2[i - 1] / q
        q = np.where(q == 0.0, tiny, q)
        count += q < 0
    return count


def _count_one(d, e2, x, tiny):
    q = d[0] - x
    if q == 0.0:
        q = tiny
    c = 1 if q < 0 else 0
    for i in range(1, len(d)):
        q = (d[i] - x) - e2[i - 1] / q
        if q == 0.0:
            q = tiny
        if q < 0:
            c += 1
    return c


def tridiag_eigs_window(matrix, window=(-np.inf, np.inf), rtol: float = np.finfo(float).eps):
    """All eigenvalues in the open ``window`` of a symmetric tridiagonal matrix, ascending.

    Bisection runs until brackets are ``rtol`` wide relative to the
    eigenvalue (default: adjacent floats), far below ``eps`` times the matrix scale
    in absolute terms, or stop shrinking.
    """
    d, e = as_tridiagonal(matrix)
    if d.size == 0:
        return np.empty(0)
    lo, hi = float(window[0]), float(window[1])
    g0, g1 = gershgorin(d, e)
    pad = 1e-12 * max(1.0, abs(g0), abs(g1))
    lo_eff = max(lo, g0 - pad)
    hi_eff = min(hi, g1 + pad)
    if hi_eff <= lo_eff:
        return np.empty(0)
    c_lo, c_hi = sturm_count(d, e, [lo_eff, hi_eff])
    # eigenvalues exactly at lo are excluded from the open window
    c_lo_incl = sturm_count(d, e, [np.nextafter(lo_eff, np.inf)])[0] if np.isfinite(lo) else c_lo
    ks = np.arange(c_lo_incl, c_hi)
    if ks.size == 0:
        return np.empty(0)
    a = np.full(ks.size, lo_eff)
    b = np.full(ks.size, hi_eff)
    atol = 1e-4 * np.finfo(float).eps * max(abs(g0), abs(g1), 1e-300)
    for _ in range(200):
        width = b - a
        if np.all(width <= rtol * np.maximum(np.abs(a), np.abs(b)) + atol):
            break
        m = 0.5 * (a + b)
        if np.all((m == a) | (m == b)):
            break
        c = sturm_count(d, e, m)
        above = c > ks
        b = np.where(above, m, b)
        a = np.where(above, a, m)
    # each eigenvalue lies in [a, b)
    mid = 0.5 * (a + b)
    return np.where(mid < b, mid, a)
