"""Weyl solutions: boundary-condition solutions at Regular endpoints and
recessive (square-integrable) solutions at limit-point endpoints.

At a limit-point endpoint with ``lambda`` in a spectral gap the solution
space splits into a dominant and a recessive branch.  Propagating generic
data inward from a far point contracts onto the recessive branch, so the far
point is pushed toward the endpoint until the direction at ``x_eval``
stops moving.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonDecaying, ProblemError, TailBoundError
from .ode import DEFAULT_TOL, State, integrate_vector, propagate, vector_rhs
from .problem import EndpointClass
from .sampled import from_nodes

STAB_TOL = 1e-9
MAX_ROUNDS = 20
# generic start direction for the far point; any fixed non-special vector works
_GENERIC = (math.cos(0.7), math.sin(0.7))


@dataclass(frozen=True)
class WeylDirection:
    endpoint: str
    lam: float
    at_x: float
    state: State
    decay_rate: float
    stabilized: bool
    far_point: float = math.nan
    rounds: int = 0

    @property
    def direction(self):
        return self.state.direction()


def projective_distance(u, v) -> float:
    """Angle in [0, pi/2] between the lines spanned by ``u`` and ``v``."""
    cross = u[0] * v[1] - u[1] * v[0]
    dot = u[0] * v[0] + u[1] * v[1]
    return math.atan2(abs(cross), abs(dot))


def init_from_bc(spec, endpoint: str, lam: float) -> State:
    """Initial data at a Regular endpoint satisfying its boundary condition."""
    if spec.endpoint_class(endpoint) is not EndpointClass.REGULAR:
        raise ProblemError(f"{endpoint} endpoint is not Regular")
    alpha = spec.bc_angle(endpoint)
    return State(spec.endpoint(endpoint), (math.sin(alpha), -math.cos(alpha)), 0.0)


def _far_point(spec, endpoint, x_eval, k, d0):
    end = spec.endpoint(endpoint)
    if math.isfinite(end):
        return end + (x_eval - end) * 2.0 ** -(k + 1)
    sign = -1.0 if endpoint == "left" else 1.0
    return x_eval + sign * d0 * 2.0 ** k


def recessive_lp(spec, endpoint: str, lam: float, x_eval: float, tol: float = DEFAULT_TOL,
                 stab_tol: float = STAB_TOL, max_rounds: int = MAX_ROUNDS, d0: float = 1.0) -> WeylDirection:
    """Direction at ``x_eval`` of the solution recessive toward a limit-point ``endpoint``.

    Raises :class:`NonDecaying` when the direction fails to stabilize, or
    when the solution keeps oscillating without exponential growth inward
    (``lam`` in the essential spectrum).
    """
    if spec.endpoint_class(endpoint) is not EndpointClass.LIMIT_POINT:
        raise ProblemError(f"{endpoint} endpoint is not limit point")
    if not (spec.a < x_eval < spec.b):
        raise ValueError(f"x_eval={x_eval!r} must be interior")
    f = vector_rhs(spec, lam)
    prev = None
    last = None
    for k in range(max_rounds):
        R = _far_point(spec, endpoint, x_eval, k, d0)
        u1, u2, sigma, info = integrate_vector(f, R, _GENERIC[0], _GENERIC[1], 0.0, x_eval, tol)
        st = State(x_eval, (u1, u2), sigma)
        growth = st.log_magnitude
        rate = growth / abs(x_eval - R)
        d = st.direction()
        last = (st, rate, R, k + 1)
        if prev is not None and projective_distance(d, prev) < stab_tol:
            if rate <= 0:
                break
            return WeylDirection(endpoint, lam, x_eval, st.normalized(), rate, True, R, k + 1)
        if info["sign_changes"] >= 64 and growth < 1.0:
            raise NonDecaying(
                f"solution at lambda={lam!r} oscillates ({info['sign_changes']} sign changes) without decaying "
                f"toward the {endpoint} endpoint; lambda is not in a spectral gap")
        prev = d
    st, rate, R, rounds = last
    raise NonDecaying(
        f"Weyl direction at lambda={lam!r} toward the {endpoint} endpoint did not stabilize after {rounds} rounds "
        f"(far point {R!r}, decay rate {rate:.3g})")


def weyl_direction(spec, endpoint: str, lam: float, x_eval: float, tol: float = DEFAULT_TOL,
                   stab_tol: float = STAB_TOL) -> WeylDirection:
    """Weyl solution direction at ``x_eval`` for either endpoint class."""
    if spec.endpoint_class(endpoint) is EndpointClass.REGULAR:
        st = init_from_bc(spec, endpoint, lam)
        if x_eval != st.x:
            st = propagate(spec, lam, st, x_eval, tol)
        return WeylDirection(endpoint, lam, x_eval, st.normalized(), math.nan, True, spec.endpoint(endpoint), 0)
    return recessive_lp(spec, endpoint, lam, x_eval, tol, stab_tol)


# --- sampled tails ----------------------------------------------------------------

TAIL_GROWTH = 20.0
MAX_TAIL_ROUNDS = 40


@dataclass(frozen=True)
class WeylTail:
    """The Weyl solution sampled between ``x_glue`` and a far cut point.

    ``function`` is scaled to a unit vector at ``x_glue``.  ``tail_bound``
    bounds the weighted squared mass left out beyond ``far_point``.
    """

    endpoint: str
    lam: float
    x_glue: float
    function: object
    far_point: float
    tail_bound: float

    @property
    def direction(self):
        i = 0 if self.endpoint == "right" else -1
        return self.function.values[i]


def _mass_weight(spec, x):
    if spec.is_dirac:
        r11, r12, r22 = spec.weight(np.array([x]))
        return float(np.max(np.linalg.eigvalsh([[r11[0], r12[0]], [r12[0], r22[0]]])))
    return float(spec.weight(np.array([x]))[0])


def weyl_tail(spec, endpoint: str, lam: float, x_glue: float, tol: float = DEFAULT_TOL,
              growth: float = TAIL_GROWTH) -> WeylTail:
    """Sample the Weyl solution from ``x_glue`` out toward ``endpoint``.

    At a limit-point end the cut point is pushed out until the solution has
    decayed by ``exp(-growth)`` relative to ``x_glue``; the mass beyond is
    bounded by ``|f(R)|^2 / (2 kappa)`` at an infinite end (``kappa`` the
    mean decay rate, which underestimates the local rate for confining
    tails) and by ``|f(R)|^2 |R - end|`` at a finite one.  Raises
    :class:`TailBoundError` when the decay needed is never reached.
    """
    f = vector_rhs(spec, lam)
    end = spec.endpoint(endpoint)
    if spec.endpoint_class(endpoint) is EndpointClass.REGULAR:
        st = init_from_bc(spec, endpoint, lam)
        _, _, _, info = integrate_vector(f, end, st.u[0], st.u[1], 0.0, x_glue, tol, record=True)
        return WeylTail(endpoint, lam, x_glue, from_nodes(f, info["nodes"], -1), end, 0.0)
    recessive_lp(spec, endpoint, lam, x_glue, tol)
    for k in range(MAX_TAIL_ROUNDS):
        R = _far_point(spec, endpoint, x_glue, k, 1.0)
        _, _, _, info = integrate_vector(f, R, _GENERIC[0], _GENERIC[1], 0.0, x_glue, tol, record=True)
        nodes = info["nodes"]
        far, near = nodes[0], nodes[-1]
        gain = near[3] + math.log(math.hypot(near[1], near[2])) - far[3] - math.log(math.hypot(far[1], far[2]))
        if gain >= growth:
            fn = from_nodes(f, nodes, -1)
            edge2 = float(np.sum(fn(np.array([R]))[0] ** 2))
            if math.isfinite(end):
                bound = edge2 * abs(R - end)
            else:
                bound = edge2 / (2.0 * gain / abs(x_glue - R))
            return WeylTail(endpoint, lam, x_glue, fn, R, bound * _mass_weight(spec, R))
    raise TailBoundError(f"Weyl tail at lambda={lam!r} toward the {endpoint} endpoint did not decay by "
                         f"exp(-{growth}) before x={R!r}; the tail bound is not controllable")
