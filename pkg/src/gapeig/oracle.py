"""Dense finite-difference reference for r = 1 Dirichlet problems.

The central-difference matrix of ``-(p y')' + q y`` on ``N`` interior nodes
is symmetric tridiagonal with ``p`` sampled at half-points.  Its spectrum is
polluted only by O(h^2) discretization error, which Richardson extrapolation
over ``N`` and ``2N`` removes to leading order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ProblemError
from .problem import SpectralWindow
from .tridiag import sturm_count, tridiag_eigs_window


@dataclass(frozen=True)
class OracleResult:
    interval: tuple
    N: int
    window: SpectralWindow
    coarse: np.ndarray
    fine: np.ndarray
    extrapolated: np.ndarray

    @property
    def values(self):
        return self.extrapolated


def fd_matrix(spec, interval, N: int):
    """Diagonal and off-diagonal of the N-point Dirichlet discretization."""
    A, B = map(float, interval)
    h = (B - A) / (N + 1)
    x = A + h * np.arange(1, N + 1)
    xh = A + h * (np.arange(N + 1) + 0.5)
    p_fn, q_fn, _ = spec.sl_functions()
    p = np.asarray(np.broadcast_to(p_fn.vectorized(xh), xh.shape), dtype=float)
    q = np.asarray(np.broadcast_to(q_fn.vectorized(x), x.shape), dtype=float)
    d = (p[:-1] + p[1:]) / h**2 + q
    e = -p[1:-1] / h**2
    return d, e, h


def _check(spec, interval, N):
    if spec.is_dirac:
        raise ProblemError("the finite-difference oracle handles Sturm-Liouville problems only")
    _, _, r = spec.sl_functions()
    if not (r.is_constant and r.constant_value() == 1.0):
        raise ProblemError("the finite-difference oracle requires r = 1")
    A, B = map(float, interval)
    if not (math.isfinite(A) and math.isfinite(B) and A < B):
        raise ProblemError(f"oracle interval must be finite with A < B, got {interval!r}")
    if not (spec.a <= A and B <= spec.b):
        raise ProblemError(f"oracle interval {interval!r} is not inside ({spec.a}, {spec.b})")
    if N < 10:
        raise ProblemError(f"oracle needs N >= 10, got {N}")


def fd_eigenvalues(spec, interval, N: int, window, with_index: bool = False):
    """Discrete eigenvalues in ``window``; optionally also the absolute index of the first one."""
    _check(spec, interval, N)
    d, e, _ = fd_matrix(spec, interval, N)
    vals = tridiag_eigs_window((d, e), (window[0], window[1]))
    if with_index:
        return vals, int(sturm_count(d, e, [window[0]])[0])
    return vals


def dense_fd_oracle(spec, interval, N: int, window) -> OracleResult:
    """Eigenvalues in ``window`` at N and 2N points plus their Richardson extrapolation.

    Levels are paired by their absolute Sturm index, collected over a
    widened window so a level near an edge is kept even when discretization
    moves it across.
    """
    if not isinstance(window, SpectralWindow):
        window = SpectralWindow(*window)
    _check(spec, interval, N)
    A, B = map(float, interval)
    pad = 0.25 * (window.lambda1 - window.lambda0)
    wide = (window.lambda0 - pad, window.lambda1 + pad)
    coarse, i0 = fd_eigenvalues(spec, interval, N, wide, with_index=True)
    fine, j0 = fd_eigenvalues(spec, interval, 2 * N, wide, with_index=True)
    h1 = (B - A) / (N + 1)
    h2 = (B - A) / (2 * N + 1)
    lo = max(i0, j0)
    hi = min(i0 + coarse.size, j0 + fine.size)
    c = coarse[lo - i0:hi - i0]
    f = fine[lo - j0:hi - j0]
    ext = (h1**2 * f - h2**2 * c) / (h1**2 - h2**2)
    keep = (ext > window.lambda0) & (ext < window.lambda1)
    return OracleResult((A, B), N, window, c[keep], f[keep], ext[keep])


@dataclass(frozen=True)
class Gap:
    lower_edge: float
    upper_edge: float
    levels: tuple

    def window(self, shrink: float = 0.1):
        """Sub-window kept ``shrink`` of the gap width away from both estimated edges."""
        w = self.upper_edge - self.lower_edge
        return SpectralWindow(self.lower_edge + shrink * w, self.upper_edge - shrink * w)


def locate_gaps(coarse_levels, fine_levels, isolation: float = 0.3, match_tol: float = 1e-4):
    """Spectral gaps seen in the levels of two Dirichlet boxes of different size.

    Band levels crowd together as the box grows, while a gap eigenvalue stays
    put and keeps its distance from its neighbours.  A level of ``fine_levels``
    counts as isolated when no other level lies within ``isolation`` and as
    stable when ``coarse_levels`` has a level within ``match_tol``.  Each run
    of isolated stable levels with band levels on both sides gives a gap whose
    edges are the nearest band levels in ``fine_levels``.  Box edges place the
    extreme band levels just inside the true bands, so the edges returned
    overestimate the gap slightly.
    """
    fine = np.sort(np.asarray(fine_levels, dtype=float))
    coarse = np.sort(np.asarray(coarse_levels, dtype=float))
    if fine.size == 0:
        return []
    gapsl = np.diff(fine)
    left = np.concatenate([[np.inf], gapsl])
    right = np.concatenate([gapsl, [np.inf]])
    isolated = (left > isolation) & (right > isolation)
    if coarse.size:
        pos = np.clip(np.searchsorted(coarse, fine), 1, coarse.size) - 1
        near = np.minimum(np.abs(coarse[pos] - fine),
                          np.abs(coarse[np.minimum(pos + 1, coarse.size - 1)] - fine))
        stable = near <= match_tol
    else:
        stable = np.zeros(fine.size, dtype=bool)
    gaps = []
    i = 0
    while i < fine.size:
        if not (isolated[i] and stable[i]):
            i += 1
            continue
        j = i
        while j + 1 < fine.size and isolated[j + 1] and stable[j + 1]:
            j += 1
        band_below = i > 0 and not isolated[i - 1]
        band_above = j + 1 < fine.size and not isolated[j + 1]
        if band_below and band_above:
            gaps.append(Gap(float(fine[i - 1]), float(fine[j + 1]), tuple(fine[i:j + 1].tolist())))
        i = j + 1
    return gaps
