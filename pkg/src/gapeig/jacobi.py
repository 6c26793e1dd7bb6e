"""Half-line Jacobi operators and their Weyl-corrected truncations.

The operator acts as ``(J f)_k = a_{k-1} f_{k-1} + b_k f_k + a_k f_{k+1}``
for ``k = 0, 1, ...`` with ``f_{-1} = 0``.  The discrete Wronskian is
``W_k(u, f) = a_k (u_k f_{k+1} - u_{k+1} f_k)``; requiring it to vanish at
``k = n`` eliminates ``f_{n+1} = (u_{n+1} / u_n) f_n``, which only changes
the last diagonal entry of the ``(n+1) x (n+1)`` section.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, NonDecaying
from .expr import CoefficientField
from .problem import SpectralWindow
from .truncation import NaiveDirichlet, OneSidedLP, TwoSidedWeyl
from .tridiag import tridiag_eigs_window

MAX_WEYL_ROUNDS = 30


@dataclass(frozen=True)
class JacobiOperator:
    """Coefficient sequences as expressions in ``k``, with per-index overrides.

    ``b_overrides={0: 2.0}`` on the free operator models a single-site impurity.
    ``band`` is the essential spectrum; when omitted it is detected from the
    limits of ``a_k`` and ``b_k``.
    """

    a_expr: str = "1"
    b_expr: str = "0"
    a_overrides: dict = field(default_factory=dict)
    b_overrides: dict = field(default_factory=dict)
    band: tuple | None = None
    n_probe: int = 1000

    def __post_init__(self):
        object.__setattr__(self, "_a", CoefficientField(self.a_expr, "k"))
        object.__setattr__(self, "_b", CoefficientField(self.b_expr, "k"))
        probes = list(range(self.n_probe)) + [10.0 ** e for e in range(4, 9)]
        for k in probes:
            ak = self.a(k)
            if not (math.isfinite(ak) and ak > 0):
                raise InputError(f"off-diagonal entry a_{k} = {ak!r} must be positive and finite")
            bk = self.b(k)
            if not math.isfinite(bk):
                raise InputError(f"diagonal entry b_{k} = {bk!r} must be finite")

    def a(self, k) -> float:
        if k in self.a_overrides:
            return float(self.a_overrides[k])
        return float(self._a(float(k)))

    def b(self, k) -> float:
        if k in self.b_overrides:
            return float(self.b_overrides[k])
        return float(self._b(float(k)))

    def essential_band(self):
        """``[b_inf - 2 a_inf, b_inf + 2 a_inf]`` from the asymptotic entries, or the declared band."""
        if self.band is not None:
            return tuple(map(float, self.band))
        ks = (1e6, 2e6, 4e6)
        av = [self.a(k) for k in ks]
        bv = [self.b(k) for k in ks]
        if max(av) - min(av) > 1e-6 * max(1.0, abs(av[-1])) or max(bv) - min(bv) > 1e-6 * max(1.0, abs(bv[-1])):
            raise InputError("coefficients have no detectable limits; supply the essential band explicitly")
        return (bv[-1] - 2 * av[-1], bv[-1] + 2 * av[-1])

    def section(self, n: int):
        """Diagonal and off-diagonal of rows ``0..n``."""
        d = np.array([self.b(k) for k in range(n + 1)])
        e = np.array([self.a(k) for k in range(n)])
        return d, e


def free_impurity(v: float) -> JacobiOperator:
    """Free operator (a = 1, b = 0) with ``b_0 = v``; for ``|v| > 1`` its bound state is ``v + 1/v``."""
    return JacobiOperator("1", "0", b_overrides={0: float(v)})


@dataclass(frozen=True)
class WeylSequence:
    lam: float
    k_eval: int
    ratios: np.ndarray
    far_index: int
    stabilized: bool

    @property
    def ratio(self) -> float:
        """``u_{k_eval+1} / u_{k_eval}`` of the decaying solution."""
        return float(self.ratios[self.k_eval])


def _backward_ratios(op, lam, k_eval, K):
    # r_k = u_{k+1}/u_k from u_{K+1} = 0, u_K = 1 (Miller-style downward recurrence)
    ratios = np.empty(k_eval + 1)
    r = 0.0
    for k in range(K, 0, -1):
        den = (lam - op.b(k)) - op.a(k) * r
        if den == 0.0:
            return None
        r = op.a(k - 1) / den
        if k - 1 <= k_eval:
            ratios[k - 1] = r
    return ratios


def weyl_sequence(op: JacobiOperator, lam: float, k_eval: int, tol: float = 1e-14) -> WeylSequence:
    """Ratios ``u_{k+1}/u_k`` for ``k <= k_eval`` of the solution decaying as ``k -> inf``.

    The far index doubles until the ratio at ``k_eval`` moves by less than
    ``tol`` (relative).  Raises :class:`NonDecaying` for ``lam`` in the
    essential band or when no stable ratio emerges.
    """
    lo, hi = op.essential_band()
    if lo <= lam <= hi:
        raise NonDecaying(f"lambda={lam!r} lies in the essential band [{lo}, {hi}]; no decaying solution")
    m = 16
    prev = None
    for _ in range(MAX_WEYL_ROUNDS):
        K = k_eval + m
        ratios = _backward_ratios(op, lam, k_eval, K)
        if ratios is not None:
            r = ratios[k_eval]
            if prev is not None and abs(r - prev) <= tol * max(1.0, abs(r)):
                if abs(r) >= 1.0:
                    break
                return WeylSequence(float(lam), int(k_eval), ratios, K, True)
            prev = r
        m *= 2
    raise NonDecaying(f"backward recurrence at lambda={lam!r} did not stabilize a decaying ratio at k={k_eval}")


def _forward_ratio(op, lam, n):
    """``u_{n+1}/u_n`` for the solution with ``u_{-1} = 0``, ``u_0 = 1`` (renormalized pairs)."""
    um, u = 0.0, 1.0
    for k in range(n + 1):
        up = ((lam - op.b(k)) * u - (op.a(k - 1) if k > 0 else 0.0) * um) / op.a(k)
        s = max(abs(u), abs(up))
        um, u = u / s, up / s
    if um == 0.0:
        return math.inf
    return u / um


def corner_ratio(op, scheme, window: SpectralWindow, n: int) -> float:
    """``u_{n+1}/u_n`` of the solution that generates the condition at ``n``."""
    if isinstance(scheme, TwoSidedWeyl):
        lam_b = window.midpoint if scheme.lambda_b is None else float(scheme.lambda_b)
        return weyl_sequence(op, lam_b, n).ratio
    if isinstance(scheme, OneSidedLP):
        lam_e = window.lambda0 if scheme.edge == "lambda0" else window.lambda1
        return _forward_ratio(op, lam_e, n)
    if isinstance(scheme, NaiveDirichlet):
        return 0.0
    raise TypeError(f"unknown scheme {scheme!r}")


def truncate_jacobi(op: JacobiOperator, scheme, window, n: int) -> np.ndarray:
    """Dense symmetric tridiagonal ``(n+1) x (n+1)`` truncation for ``scheme``."""
    if n < 2:
        raise InputError(f"truncation needs n >= 2, got {n}")
    if not isinstance(window, SpectralWindow):
        window = SpectralWindow(*window)
    d, e = op.section(n)
    d[-1] += op.a(n) * corner_ratio(op, scheme, window, n)
    return np.diag(d) + np.diag(e, 1) + np.diag(e, -1)


def jacobi_eigenvalues(op, scheme, window, n: int) -> np.ndarray:
    if not isinstance(window, SpectralWindow):
        window = SpectralWindow(*window)
    m = truncate_jacobi(op, scheme, window, n)
    return tridiag_eigs_window(m, (window.lambda0, window.lambda1))


def dirichlet_oracle(op, window, size: int = 2000) -> np.ndarray:
    """Eigenvalues in ``window`` of a large plain section, by dense LAPACK."""
    if not isinstance(window, SpectralWindow):
        window = SpectralWindow(*window)
    d, e = op.section(size - 1)
    vals = np.linalg.eigvalsh(np.diag(d) + np.diag(e, 1) + np.diag(e, -1))
    return vals[(vals > window.lambda0) & (vals < window.lambda1)]


JACOBI_EDGE_TOL = 1e-10


def jacobi_study(op, scheme, window, ns, conv_tol: float = 1e-12):
    """Eigenvalues of the truncations at every ``n`` in ``ns``, as a study result.

    Eigenvalues within ``JACOBI_EDGE_TOL`` of a window edge are reported as
    edge-adjacent, as in the continuous solver.
    """
    from .convergence import StudyResult, TruncationResult, match_trajectories
    from .eigen import EigenList

    if not isinstance(window, SpectralWindow):
        window = SpectralWindow(*window)
    ns = [int(n) for n in ns]
    if len(ns) < 3 or any(b <= a for a, b in zip(ns, ns[1:])):
        raise InputError("a Jacobi study needs at least 3 strictly increasing truncation indices")
    per_n = []
    for i, n in enumerate(ns):
        res = TruncationResult(i, 0.0, float(n))
        try:
            vals = jacobi_eigenvalues(op, scheme, window, n)
        except NonDecaying as exc:
            res.error = f"{type(exc).__name__}: {exc}"
            per_n.append(res)
            continue
        edge = (np.abs(vals - window.lambda0) <= JACOBI_EDGE_TOL) | (np.abs(vals - window.lambda1) <= JACOBI_EDGE_TOL)
        res.eigen = EigenList(vals[~edge], (), 0.0, window, tuple(vals[edge].tolist()), JACOBI_EDGE_TOL)
        res.count = int((~edge).sum())
        per_n.append(res)
    seqs = [r.eigen.values.tolist() if r.ok else None for r in per_n]
    trajs = match_trajectories(seqs, conv_tol, window.lambda1 - window.lambda0)
    return StudyResult(op, scheme, window, [(0.0, float(n)) for n in ns], 0.0, conv_tol, per_n, trajs)
