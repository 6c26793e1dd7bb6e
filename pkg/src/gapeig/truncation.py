"""Regular truncated operators H_n on [a_n, b_n] with Weyl-generated
boundary conditions.

A condition ``W_x(u, f) = 0`` forces ``f`` onto the line spanned by ``u`` at
``x``; it is stored as the angle ``alpha`` with
``cos(alpha) u1 + sin(alpha) u2 = 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ProblemError, SchemeMismatch
from .ode import DEFAULT_TOL, State, propagate
from .problem import EndpointClass, SpectralWindow, normalize_angle
from .weyl import weyl_direction


@dataclass(frozen=True)
class TwoSidedWeyl:
    """u = psi_a(lambda_a), v = psi_b(lambda_b); ``None`` means the window midpoint."""

    lambda_a: float | None = None
    lambda_b: float | None = None

    label = "two-sided"


@dataclass(frozen=True)
class OneSidedLP:
    """u = psi_a(lambda_a), v = psi_a(lambda_edge) carried across to b_n."""

    lambda_a: float | None = None
    edge: str = "lambda0"

    label = "one-sided"

    def __post_init__(self):
        if self.edge not in ("lambda0", "lambda1"):
            raise ValueError(f"edge must be 'lambda0' or 'lambda1', got {self.edge!r}")


@dataclass(frozen=True)
class NaiveDirichlet:
    label = "dirichlet"


def describe_scheme(scheme) -> str:
    """Text form accepted by :func:`parse_scheme`; unset parameters are omitted."""
    if isinstance(scheme, TwoSidedWeyl):
        if scheme.lambda_a is None and scheme.lambda_b is None:
            return "two-sided"
        la = "" if scheme.lambda_a is None else repr(float(scheme.lambda_a))
        lb = "" if scheme.lambda_b is None else repr(float(scheme.lambda_b))
        return f"two-sided:{la},{lb}" if lb else f"two-sided:{la}"
    if isinstance(scheme, OneSidedLP):
        if scheme.lambda_a is None:
            return f"one-sided:{scheme.edge}"
        return f"one-sided:{scheme.edge}:{float(scheme.lambda_a)!r}"
    return "dirichlet"


def parse_scheme(text: str):
    """``two-sided[:la[,lb]]``, ``one-sided[:lambda0|lambda1[:la]]`` or ``dirichlet``."""
    parts = text.strip().split(":")
    head = parts[0].lower()
    if head in ("two-sided", "two", "weyl"):
        vals = parts[1].split(",") if len(parts) > 1 else []
        lams = [float(v) if v.strip() else None for v in vals]
        la = lams[0] if lams else None
        lb = lams[1] if len(lams) > 1 else la
        return TwoSidedWeyl(la, lb)
    if head in ("one-sided", "one"):
        edge = parts[1].lower() if len(parts) > 1 and parts[1] else "lambda0"
        la = float(parts[2]) if len(parts) > 2 and parts[2] else None
        return OneSidedLP(la, edge)
    if head in ("dirichlet", "naive"):
        return NaiveDirichlet()
    raise ValueError(f"unknown scheme {text!r}")


@dataclass(frozen=True)
class RegularProblem:
    """H_n: the problem restricted to [a_n, b_n] with separated conditions.

    ``u_state``/``v_state`` are the generating solutions at ``a_n``/``b_n``
    (``None`` for Dirichlet truncation).  ``match_point`` is where shooting
    branches meet; it is fixed per problem so the mismatch is continuous in
    the spectral parameter.
    """

    spec: object
    a_n: float
    b_n: float
    alpha_n: float
    beta_n: float
    scheme: object = None
    window: SpectralWindow | None = None
    u_lambda: float | None = None
    v_lambda: float | None = None
    u_state: State | None = None
    v_state: State | None = None
    provenance: dict = field(default_factory=dict, compare=False)
    match_point: float = math.nan

    def __post_init__(self):
        if not (math.isfinite(self.a_n) and math.isfinite(self.b_n) and self.a_n < self.b_n):
            raise ProblemError(f"truncation needs finite a_n < b_n, got ({self.a_n}, {self.b_n})")
        if self.a_n < self.spec.a or self.b_n > self.spec.b:
            raise ProblemError(f"[{self.a_n}, {self.b_n}] is not inside ({self.spec.a}, {self.spec.b})")
        if math.isnan(self.match_point):
            object.__setattr__(self, "match_point", choose_match_point(self.spec, self.a_n, self.b_n))

    def with_angles(self, alpha_n=None, beta_n=None) -> "RegularProblem":
        return RegularProblem(self.spec, self.a_n, self.b_n,
                              self.alpha_n if alpha_n is None else normalize_angle(alpha_n),
                              self.beta_n if beta_n is None else normalize_angle(beta_n),
                              self.scheme, self.window, self.u_lambda, self.v_lambda,
                              self.u_state, self.v_state, self.provenance, self.match_point)


def choose_match_point(spec, a_n, b_n, n=401) -> float:
    """Interior point minimizing the potential profile; ties resolved toward the middle."""
    xs = np.linspace(a_n, b_n, n)[1:-1]
    prof = spec.potential_profile(xs)
    if not np.all(np.isfinite(prof)):
        return 0.5 * (a_n + b_n)
    lo = prof.min()
    cand = np.flatnonzero(prof <= lo + 1e-12 * max(1.0, abs(lo)))
    mid = 0.5 * (a_n + b_n)
    return float(xs[cand[np.argmin(np.abs(xs[cand] - mid))]])


def bc_angle_from_state(s) -> float:
    """Angle ``alpha`` in [0, pi) with ``cos(alpha) u1 + sin(alpha) u2 = 0``."""
    u = s.u if isinstance(s, State) else s
    if u[0] == 0.0 and u[1] == 0.0:
        raise ValueError("zero state has no boundary-condition angle")
    return normalize_angle(math.atan2(u[0], -u[1]))


def _check_lambda(name, lam, window):
    if not (window.lambda0 <= lam <= window.lambda1):
        raise ProblemError(f"{name}={lam!r} must lie in the closed window [{window.lambda0}, {window.lambda1}]")


def build_regular_problem(spec, scheme, window: SpectralWindow, a_n: float, b_n: float,
                          tol: float = DEFAULT_TOL) -> RegularProblem:
    """Construct H_n for ``scheme`` on ``[a_n, b_n]``."""
    if isinstance(scheme, OneSidedLP) and spec.right_class is not EndpointClass.LIMIT_POINT:
        raise SchemeMismatch("the one-sided scheme requires a limit-point right endpoint; "
                             "it cannot hold when the right endpoint carries its own boundary condition")
    if isinstance(scheme, NaiveDirichlet):
        return RegularProblem(spec, a_n, b_n, 0.0, 0.0, scheme, window)
    if not isinstance(scheme, (TwoSidedWeyl, OneSidedLP)):
        raise TypeError(f"unknown scheme {scheme!r}")
    lam_a = window.midpoint if scheme.lambda_a is None else float(scheme.lambda_a)
    _check_lambda("lambda_a", lam_a, window)
    prov = {}
    if spec.left_class is EndpointClass.REGULAR and a_n == spec.a:
        u_state = State(a_n, (math.sin(spec.left_bc_angle), -math.cos(spec.left_bc_angle)))
    else:
        wd = weyl_direction(spec, "left", lam_a, a_n, tol)
        prov["u"] = wd
        u_state = wd.state
    if isinstance(scheme, TwoSidedWeyl):
        lam_b = window.midpoint if scheme.lambda_b is None else float(scheme.lambda_b)
        _check_lambda("lambda_b", lam_b, window)
        if spec.right_class is EndpointClass.REGULAR and b_n == spec.b:
            v_state = State(b_n, (math.sin(spec.right_bc_angle), -math.cos(spec.right_bc_angle)))
        else:
            wd = weyl_direction(spec, "right", lam_b, b_n, tol)
            prov["v"] = wd
            v_state = wd.state
    else:
        lam_b = window.lambda0 if scheme.edge == "lambda0" else window.lambda1
        if lam_b == lam_a:
            start = u_state
        else:
            wd = weyl_direction(spec, "left", lam_b, a_n, tol)
            prov["v_left"] = wd
            start = wd.state
        v_state = propagate(spec, lam_b, start, b_n, tol).normalized()
        prov["v_start"] = start
    return RegularProblem(spec, a_n, b_n, bc_angle_from_state(u_state), bc_angle_from_state(v_state),
                          scheme, window, lam_a, lam_b, u_state, v_state, prov)


def truncation_sequence(spec, count: int, start: float = 4.0, factor: float = math.sqrt(2.0)):
    """Nested truncations growing geometrically toward singular endpoints.

    Infinite ends move as ``start * factor**k``; finite limit-point ends
    approach as ``start_distance * factor**-k`` with ``start_distance = 1``;
    Regular ends stay put.
    """
    out = []
    for k in range(count):
        g = factor ** k
        if spec.left_class is EndpointClass.REGULAR:
            a_n = spec.a
        elif math.isfinite(spec.a):
            a_n = spec.a + 1.0 / g
        else:
            a_n = -start * g
        if spec.right_class is EndpointClass.REGULAR:
            b_n = spec.b
        elif math.isfinite(spec.b):
            b_n = spec.b - 1.0 / g
        else:
            b_n = (spec.a if math.isfinite(spec.a) and spec.a > 0 else 0.0) + start * g
        out.append((float(a_n), float(b_n)))
    return out
