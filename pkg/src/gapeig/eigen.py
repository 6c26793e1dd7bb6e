"""Eigenvalues and eigenfunctions of regular truncated problems by Prufer shooting.

Two Prufer angles are shot toward the problem's match point ``c``: the left
one from ``a_n`` starting in [0, pi), the right one from ``b_n`` starting in
(0, pi].  Their difference ``D(lam) = theta_L(c) - theta_R(c)`` is
continuous and strictly increasing in ``lam``, and ``lam`` is an eigenvalue
exactly when ``D(lam)`` is a multiple of pi.  For Sturm-Liouville problems
``D(lam_k) = k pi`` for the k-th eigenvalue (k = 0, 1, ...), so counting is
absolute there; Dirac operators are unbounded below and only differences of
``D`` across a window are meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import BudgetExceeded, NotAnEigenvalue
from .ode import DEFAULT_TOL, angle_of, integrate_scalar, integrate_vector, prufer_rhs, vector_rhs
from .sampled import SampledFunction, from_nodes, weighted_norm

MAX_EIGENVALUES = 10000
MAX_BISECTION = 200


def start_angles(rp):
    """Prufer angles at ``a_n`` in [0, pi) and at ``b_n`` in (0, pi]."""
    spec = rp.spec
    tl = math.fmod(angle_of(spec, (math.sin(rp.alpha_n), -math.cos(rp.alpha_n))) + 2 * math.pi, math.pi)
    tr = math.fmod(angle_of(spec, (math.sin(rp.beta_n), -math.cos(rp.beta_n))) + 2 * math.pi, math.pi)
    if tr <= 0.0:
        tr += math.pi
    return tl, tr


class Shooter:
    """Memoized evaluation of the Prufer mismatch ``D(lam)`` for one problem."""

    def __init__(self, rp, tol=DEFAULT_TOL):
        self.rp = rp
        self.tol = tol
        self.theta_a, self.theta_b = start_angles(rp)
        self._cache = {}
        self.evaluations = 0

    def __call__(self, lam: float) -> float:
        lam = float(lam)
        d = self._cache.get(lam)
        if d is None:
            rp = self.rp
            g = prufer_rhs(rp.spec, lam)
            c = rp.match_point
            tl, _ = integrate_scalar(g, rp.a_n, self.theta_a, c, self.tol)
            tr, _ = integrate_scalar(g, rp.b_n, self.theta_b, c, self.tol)
            d = tl - tr
            self._cache[lam] = d
            self.evaluations += 1
        return d


def mismatch(rp, lam: float, tol: float = DEFAULT_TOL) -> float:
    return Shooter(rp, tol)(lam)


def _window_indices(d0, d1):
    lo = math.floor(d0 / math.pi) + 1
    hi = math.ceil(d1 / math.pi) - 1
    return range(lo, hi + 1)


def default_edge_tol(tol: float) -> float:
    return 1e4 * tol


def _bands(window, edge_tol):
    """Outer and inner limits of the two edge bands, which straddle the window edges."""
    l0, l1 = window.lambda0, window.lambda1
    e = min(edge_tol, 0.25 * (l1 - l0))
    return l0 - e, l0 + e, l1 - e, l1 + e


def count_in_window(rp, window, tol: float = DEFAULT_TOL, edge_tol: float | None = None, shooter=None) -> int:
    """Number of eigenvalues of ``rp`` in the open window ``(lambda0, lambda1)``.

    Eigenvalues closer than ``edge_tol`` to an edge are edge-adjacent: their
    side of the edge is not numerically decidable, so they are excluded here
    and reported separately by :func:`eigenvalues_in_window`.
    """
    sh = shooter or Shooter(rp, tol)
    _, in0, in1, _ = _bands(window, default_edge_tol(tol) if edge_tol is None else edge_tol)
    return max(0, len(_window_indices(sh(in0), sh(in1))))


def prufer_count(rp, lam: float, tol: float = DEFAULT_TOL) -> int:
    """Oscillation count N(lam): eigenvalues strictly below ``lam`` (Sturm-Liouville only)."""
    if rp.spec.is_dirac:
        raise ValueError("absolute eigenvalue counts do not exist for Dirac operators")
    d = mismatch(rp, lam, tol)
    return 0 if d <= 0 else math.ceil(d / math.pi)


@dataclass(frozen=True)
class EigenList:
    """Eigenvalues strictly inside the window, plus edge-adjacent ones kept apart."""

    values: np.ndarray
    indices: tuple
    tol: float
    window: object
    edge_values: tuple = ()
    edge_tol: float = 0.0

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values.tolist())

    def __getitem__(self, i):
        return float(self.values[i])


def _refine(sh, ks, lo, hi, tol):
    out = []
    for k in ks:
        target = k * math.pi
        lam = brentq(lambda t: sh(t) - target, lo, hi, xtol=0.25 * tol, rtol=4 * np.finfo(float).eps,
                     maxiter=MAX_BISECTION)
        out.append(lam)
        lo = lam
    return out


def eigenvalues_in_window(rp, window, tol: float = DEFAULT_TOL, edge_tol: float | None = None,
                          shooter=None) -> EigenList:
    """All eigenvalues of ``rp`` in the open window, refined to ``|dlam| < tol``.

    Each eigenvalue is isolated by its Prufer index and refined by Brent's
    method (bisection safeguarded secant/inverse-quadratic steps) on the
    continuous mismatch.
    """
    sh = shooter or Shooter(rp, tol)
    edge_tol = default_edge_tol(tol) if edge_tol is None else edge_tol
    l0, in0, in1, l1 = _bands(window, edge_tol)
    d = [sh(v) for v in (l0, in0, in1, l1)]
    ks = _window_indices(d[1], d[2])
    if len(ks) > MAX_EIGENVALUES:
        raise BudgetExceeded(f"{len(ks)} eigenvalues in window exceeds the cap of {MAX_EIGENVALUES}")
    values = _refine(sh, ks, in0, in1, tol)
    low = [k for k in _window_indices(d[0], d[1])]
    high = [k for k in _window_indices(d[2], d[3])]
    edge = _refine(sh, low, l0, in0, tol) + _refine(sh, high, in1, l1, tol)
    # an index sitting exactly on a band boundary is counted once, as interior
    edge = [v for v in edge if not any(abs(v - w) <= tol for w in values)]
    return EigenList(np.array(values), tuple(ks), tol, window, tuple(edge), edge_tol)


@dataclass(frozen=True)
class Eigenfunction:
    lam: float
    function: SampledFunction
    residual: float
    match_point: float
    rp: object = None

    def __call__(self, xs):
        return self.function(xs)


def _plateau(xs, diff, width=1.0):
    """Mask of the level band of ``diff`` occupying the longest stretch of ``x``.

    Each shooting branch is exact up to the eigenfunction's peak and then
    picks up the dominant solution, so the log-magnitude difference of the
    two branches is flat exactly where both can be trusted.
    """
    w = np.gradient(xs) if xs.size > 1 else np.ones(1)
    w = np.abs(w)
    order = np.argsort(diff)
    d, ww = diff[order], w[order]
    cum = np.concatenate([[0.0], np.cumsum(ww)])
    hi = np.searchsorted(d, d + 2 * width, side="right")
    best = int(np.argmax(cum[hi] - cum[np.arange(d.size)]))
    lo_v = d[best]
    return (diff >= lo_v) & (diff <= lo_v + 2 * width)


def eigenfunction(rp, lam: float, tol: float = DEFAULT_TOL, check: float | None = None) -> Eigenfunction:
    """Normalized eigenfunction of ``rp`` at the eigenvalue ``lam``.

    Branches are shot from both ends and matched where the smaller of the two
    incoming log-magnitudes is largest, among points where both branches
    agree in shape; ``residual`` is the relative Wronskian of the two
    branches there.
    """
    spec = rp.spec
    check = 100 * tol if check is None else check
    f = vector_rhs(spec, lam)
    ul = (math.sin(rp.alpha_n), -math.cos(rp.alpha_n))
    ur = (math.sin(rp.beta_n), -math.cos(rp.beta_n))
    _, _, _, left = integrate_vector(f, rp.a_n, ul[0], ul[1], 0.0, rp.b_n, tol, record=True)
    _, _, _, right = integrate_vector(f, rp.b_n, ur[0], ur[1], 0.0, rp.a_n, tol, record=True)
    ln = np.asarray(left["nodes"])
    rn = np.asarray(right["nodes"])[::-1]
    ell_l = ln[:, 3] + np.log(np.hypot(ln[:, 1], ln[:, 2]))
    ell_r = np.interp(ln[:, 0], rn[:, 0], rn[:, 3] + np.log(np.hypot(rn[:, 1], rn[:, 2])))
    trusted = _plateau(ln[:, 0], ell_l - ell_r)
    score = np.where(trusted, np.minimum(ell_l - ell_l[0], ell_r - ell_r[-1]), -np.inf)
    j = int(np.argmax(score))
    c = float(ln[j, 0])
    _, _, _, right = integrate_vector(f, rp.b_n, ur[0], ur[1], 0.0, c, tol, record=True)
    fl = from_nodes(f, ln[: j + 1], -1)
    fr = from_nodes(f, right["nodes"], -1)
    dir_l, dir_r = fl.values[-1], fr.values[0]
    residual = abs(dir_l[0] * dir_r[1] - dir_l[1] * dir_r[0])
    if residual > check:
        raise NotAnEigenvalue(f"lambda={lam!r} is not an eigenvalue of the truncated problem: "
                              f"branch mismatch {residual:.3g} at x={c:.6g} exceeds {check:.3g}")
    sign = 1.0 if dir_l @ dir_r >= 0 else -1.0
    fn = SampledFunction(np.concatenate([fl.x, fr.x[1:]]),
                         np.concatenate([fl.values, sign * fr.values[1:]]),
                         np.concatenate([fl.derivs, sign * fr.derivs[1:]]))
    fn = fn.scaled(1.0 / weighted_norm(spec, fn))
    return Eigenfunction(float(lam), fn, float(residual), c, rp)
