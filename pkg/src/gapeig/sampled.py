"""Piecewise cubic Hermite representation of sampled solutions and
weighted L^2 quadrature on adaptive meshes."""

from __future__ import annotations

import numpy as np

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(5)


class SampledFunction:
    """A 2-component function known at increasing nodes with derivatives.

    Evaluation uses cubic Hermite interpolation per component; outside
    ``[x[0], x[-1]]`` the function is zero (zero extension).
    """

    def __init__(self, x, values, derivs):
        x = np.asarray(x, dtype=float)
        order = np.argsort(x, kind="stable")
        x = x[order]
        keep = np.concatenate([[True], np.diff(x) > 0])
        self.x = x[keep]
        self.values = np.asarray(values, dtype=float)[order][keep]
        self.derivs = np.asarray(derivs, dtype=float)[order][keep]

    @property
    def support(self):
        return float(self.x[0]), float(self.x[-1])

    def scaled(self, c: float) -> "SampledFunction":
        return SampledFunction(self.x, c * self.values, c * self.derivs)

    def __call__(self, xs):
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        out = np.zeros((xs.size, 2))
        x = self.x
        inside = (xs >= x[0]) & (xs <= x[-1])
        if not inside.any() or x.size < 2:
            return out
        xi = xs[inside]
        idx = np.clip(np.searchsorted(x, xi, side="right") - 1, 0, x.size - 2)
        x0, x1 = x[idx], x[idx + 1]
        h = x1 - x0
        t = (xi - x0) / h
        t2, t3 = t * t, t * t * t
        h00 = 2 * t3 - 3 * t2 + 1
        h10 = t3 - 2 * t2 + t
        h01 = -2 * t3 + 3 * t2
        h11 = t3 - t2
        y0, y1 = self.values[idx], self.values[idx + 1]
        d0, d1 = self.derivs[idx], self.derivs[idx + 1]
        out[inside] = (h00[:, None] * y0 + (h10 * h)[:, None] * d0 + h01[:, None] * y1 + (h11 * h)[:, None] * d1)
        return out


def from_nodes(f, nodes, ref_index: int = -1, scale: float = 1.0) -> SampledFunction:
    """Sample a recorded solution ``(x, u1, u2, sigma)`` relative to one node.

    Values are ``scale * exp(sigma - sigma_ref) * u / |u_ref|``, so the
    reference node becomes a vector of length ``|scale|``; derivatives come
    from the right-hand side ``f``.
    """
    arr = np.asarray(nodes, dtype=float)
    xs, u, sig = arr[:, 0], arr[:, 1:3], arr[:, 3]
    s_ref, n_ref = sig[ref_index], float(np.hypot(*u[ref_index]))
    vals = (scale * np.exp(sig - s_ref) / n_ref)[:, None] * u
    ders = np.array([f(x, v[0], v[1]) for x, v in zip(xs, vals)])
    return SampledFunction(xs, vals, ders)


def quadrature_nodes(breaks):
    """Composite 5-point Gauss-Legendre nodes and weights on the given breakpoints."""
    breaks = np.unique(np.asarray(breaks, dtype=float))
    if breaks.size < 2:
        return np.empty(0), np.empty(0)
    lo, hi = breaks[:-1], breaks[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    xs = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    ws = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    return xs, ws


def weighted_inner(spec, f: SampledFunction, g: SampledFunction, breaks=None) -> float:
    """Weighted inner product: ``int r f1 g1`` (SL) or ``int f^T r g`` (Dirac)."""
    if breaks is None:
        lo = max(f.x[0], g.x[0])
        hi = min(f.x[-1], g.x[-1])
        if hi <= lo:
            return 0.0
        breaks = np.concatenate([f.x, g.x])
        breaks = breaks[(breaks >= lo) & (breaks <= hi)]
        breaks = np.concatenate([[lo, hi], breaks])
    xs, ws = quadrature_nodes(breaks)
    if xs.size == 0:
        return 0.0
    return float(np.sum(ws * weighted_products(spec, xs, f(xs), g(xs))))


def weighted_products(spec, xs, fv, gv):
    """Pointwise weighted product of two sampled 2-vectors."""
    if spec.is_dirac:
        r11, r12, r22 = spec.weight(xs)
        return (fv[:, 0] * (r11 * gv[:, 0] + r12 * gv[:, 1]) + fv[:, 1] * (r12 * gv[:, 0] + r22 * gv[:, 1]))
    return spec.weight(xs) * fv[:, 0] * gv[:, 0]


def weighted_norm(spec, f: SampledFunction) -> float:
    return float(np.sqrt(weighted_inner(spec, f, f)))
