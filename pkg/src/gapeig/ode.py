"""First-order reduction of tau f = lambda f and adaptive propagation.

Solutions are carried as :class:`State` objects: a position, a 2-vector kept
in a bounded band of norms, and a log-scale exponent ``sigma`` so that the
true value is ``exp(sigma) * u``.  Solutions in spectral gaps grow or decay
exponentially, so the direction of ``u`` is the quantity of record and
``sigma`` only carries the magnitude.

For Sturm-Liouville problems ``u = (y, p y')``; for Dirac systems
``u = (psi1, psi2)`` and ``psi' = [[0, -1], [1, 0]] (lambda r - q) psi``.

The integrator is the Dormand-Prince 5(4) embedded pair with local
extrapolation.  It is written on plain floats: the systems are 2x2 and
numpy call overhead would dominate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import StepSizeUnderflow

DEFAULT_TOL = 1e-10
RENORM_LOW = 2.0 ** -4
RENORM_HIGH = 2.0 ** 4

# Dormand-Prince tableau
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
_E1, _E3, _E4, _E5, _E6, _E7 = 71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9


@dataclass(frozen=True)
class State:
    """Point value of a solution: true value is ``exp(sigma) * u``."""

    x: float
    u: tuple
    sigma: float = 0.0

    @property
    def norm(self) -> float:
        return math.hypot(self.u[0], self.u[1])

    @property
    def log_magnitude(self) -> float:
        return self.sigma + math.log(self.norm)

    def direction(self):
        n = self.norm
        return (self.u[0] / n, self.u[1] / n)

    def value(self):
        s = math.exp(self.sigma)
        return (s * self.u[0], s * self.u[1])

    def normalized(self) -> "State":
        n = self.norm
        if n == 0.0:
            return self
        return State(self.x, (self.u[0] / n, self.u[1] / n), self.sigma + math.log(n))

    def scaled(self, c: float) -> "State":
        """``u`` multiplied by ``c`` with ``sigma`` absorbing ``log abs(c)``; the value changes by ``sign(c)``."""
        return State(self.x, (self.u[0] * c, self.u[1] * c), self.sigma - math.log(abs(c)))


@dataclass
class Trajectory:
    states: list
    steps: int = 0
    rejections: int = 0
    sign_changes: int = 0
    nodes: list = field(default_factory=list)


# --- right-hand sides ---------------------------------------------------------------


def _const(fld):
    return fld.constant_value() if fld.is_constant else None


def vector_rhs(spec, lam: float):
    """Return ``f(x, u1, u2) -> (u1', u2')`` for the first-order system at ``lam``."""
    if spec.is_dirac:
        q11, q12, q22, r11, r12, r22 = spec.dirac_functions()
        cq12, cr11, cr12, cr22 = _const(q12), _const(r11), _const(r12), _const(r22)
        if cq12 == 0.0 and cr12 == 0.0 and cr11 is not None and cr22 is not None:
            l11, l22 = lam * cr11, lam * cr22

            def f(x, u1, u2):
                return (-(l22 - q22(x)) * u2, (l11 - q11(x)) * u1)
            return f

        def f(x, u1, u2):
            m11 = lam * r11(x) - q11(x)
            m12 = lam * r12(x) - q12(x)
            m22 = lam * r22(x) - q22(x)
            return (-(m12 * u1 + m22 * u2), m11 * u1 + m12 * u2)
        return f

    p, q, r = spec.sl_functions()
    cp, cr = _const(p), _const(r)
    if cp is not None and cr is not None:
        pinv, lr = 1.0 / cp, lam * cr

        def f(x, u1, u2):
            return (u2 * pinv, (q(x) - lr) * u1)
        return f

    def f(x, u1, u2):
        return (u2 / p(x), (q(x) - lam * r(x)) * u1)
    return f


def prufer_rhs(spec, lam: float):
    """Return ``g(x, theta) -> theta'`` for the Prufer angle at ``lam``.

    SL: ``(y, p y') = rho (sin t, cos t)`` and ``t' = cos^2 t / p + (lam r - q) sin^2 t``.
    Dirac: ``(psi1, psi2) = rho (sin t, -cos t)``, oriented so ``t`` increases with ``lam``:
    ``t' = (s, -c) M (s, -c)^T`` with ``M = lam r - q``.
    """
    sin, cos = math.sin, math.cos
    if spec.is_dirac:
        q11, q12, q22, r11, r12, r22 = spec.dirac_functions()
        cq12, cr11, cr12, cr22 = _const(q12), _const(r11), _const(r12), _const(r22)
        if cq12 == 0.0 and cr12 == 0.0 and cr11 is not None and cr22 is not None:
            l11, l22 = lam * cr11, lam * cr22

            def g(x, t):
                s, c = sin(t), cos(t)
                return (l11 - q11(x)) * s * s + (l22 - q22(x)) * c * c
            return g

        def g(x, t):
            s, c = sin(t), cos(t)
            m11 = lam * r11(x) - q11(x)
            m12 = lam * r12(x) - q12(x)
            m22 = lam * r22(x) - q22(x)
            return m11 * s * s - 2.0 * m12 * s * c + m22 * c * c
        return g

    p, q, r = spec.sl_functions()
    cp, cr = _const(p), _const(r)
    if cp is not None and cr is not None:
        pinv, lr = 1.0 / cp, lam * cr

        def g(x, t):
            s, c = sin(t), cos(t)
            return c * c * pinv + (lr - q(x)) * s * s
        return g

    def g(x, t):
        s, c = sin(t), cos(t)
        return c * c / p(x) + (lam * r(x) - q(x)) * s * s
    return g


def derivative(spec, lam: float, x: float, u):
    """Right-hand side of the first-order system at ``(x, u)``."""
    return vector_rhs(spec, lam)(x, float(u[0]), float(u[1]))


def angle_of(spec, u) -> float:
    """Prufer angle of a 2-vector in the convention of :func:`prufer_rhs` (in (-pi, pi])."""
    if spec.is_dirac:
        return math.atan2(u[0], -u[1])
    return math.atan2(u[0], u[1])


def vector_of(spec, theta: float):
    s, c = math.sin(theta), math.cos(theta)
    return (s, -c) if spec.is_dirac else (s, c)


# --- integrators ------------------------------------------------------------------


def _max_step(x):
    return max(0.5, 0.1 * abs(x))


def _initial_step(f_val_norm, y_norm, span, tol):
    if f_val_norm <= 0:
        h = abs(span)
    else:
        h = 0.1 * (tol ** 0.2) * y_norm / f_val_norm
    return min(abs(span), max(h, 1e-6 * abs(span)), _max_step(0.0))


def integrate_vector(f, x0, u1, u2, sigma, x1, tol=DEFAULT_TOL, h=None, record=False):
    """Propagate ``u' = f(x, u)`` from ``x0`` to ``x1`` with renormalization.

    Returns ``(u1, u2, sigma, info)`` where ``info`` holds step statistics,
    the last step size, the number of sign changes of ``u1`` and, when
    ``record`` is set, the accepted nodes ``(x, u1, u2, sigma)``.
    """
    span = x1 - x0
    nodes = [(x0, u1, u2, sigma)] if record else None
    info = {"steps": 0, "rejections": 0, "sign_changes": 0, "h": h, "nodes": nodes}
    if span == 0.0:
        return u1, u2, sigma, info
    direction = 1.0 if span > 0 else -1.0
    hmin = 1e-14 * max(abs(span), abs(x0), abs(x1), 1e-300)
    n0 = math.hypot(u1, u2)
    if n0 == 0.0:
        raise ValueError("cannot propagate the zero vector")
    if n0 < RENORM_LOW or n0 > RENORM_HIGH:
        u1, u2 = u1 / n0, u2 / n0
        sigma += math.log(n0)
    k1 = f(x0, u1, u2)
    if h is None:
        h = _initial_step(math.hypot(*k1), math.hypot(u1, u2), span, tol)
    h = min(abs(h), abs(span))
    x = x0
    steps = rej = changes = 0
    while True:
        remaining = (x1 - x) * direction
        if remaining <= 0:
            break
        hmax = _max_step(x)
        if h > hmax:
            h = hmax
        last = h >= remaining
        if last:
            h = remaining
        hs = h * direction
        a1, b1 = k1
        k2 = f(x + _C2 * hs, u1 + hs * _A21 * a1, u2 + hs * _A21 * b1)
        a2, b2 = k2
        k3 = f(x + _C3 * hs, u1 + hs * (_A31 * a1 + _A32 * a2), u2 + hs * (_A31 * b1 + _A32 * b2))
        a3, b3 = k3
        k4 = f(x + _C4 * hs, u1 + hs * (_A41 * a1 + _A42 * a2 + _A43 * a3),
               u2 + hs * (_A41 * b1 + _A42 * b2 + _A43 * b3))
        a4, b4 = k4
        k5 = f(x + _C5 * hs, u1 + hs * (_A51 * a1 + _A52 * a2 + _A53 * a3 + _A54 * a4),
               u2 + hs * (_A51 * b1 + _A52 * b2 + _A53 * b3 + _A54 * b4))
        a5, b5 = k5
        xn = x1 if last else x + hs
        k6 = f(xn, u1 + hs * (_A61 * a1 + _A62 * a2 + _A63 * a3 + _A64 * a4 + _A65 * a5),
               u2 + hs * (_A61 * b1 + _A62 * b2 + _A63 * b3 + _A64 * b4 + _A65 * b5))
        a6, b6 = k6
        v1 = u1 + hs * (_B1 * a1 + _B3 * a3 + _B4 * a4 + _B5 * a5 + _B6 * a6)
        v2 = u2 + hs * (_B1 * b1 + _B3 * b3 + _B4 * b4 + _B5 * b5 + _B6 * b6)
        k7 = f(xn, v1, v2)
        a7, b7 = k7
        e1 = hs * (_E1 * a1 + _E3 * a3 + _E4 * a4 + _E5 * a5 + _E6 * a6 + _E7 * a7)
        e2 = hs * (_E1 * b1 + _E3 * b3 + _E4 * b4 + _E5 * b5 + _E6 * b6 + _E7 * b7)
        scale = tol * max(math.hypot(u1, u2), math.hypot(v1, v2))
        err = math.hypot(e1, e2) / scale
        if err != err:  # nan
            err = 1e10
        if err <= 1.0:
            steps += 1
            if (v1 > 0) != (u1 > 0) and v1 != 0.0:
                changes += 1
            x, u1, u2, k1 = xn, v1, v2, k7
            nrm = math.hypot(u1, u2)
            if nrm < RENORM_LOW or nrm > RENORM_HIGH:
                u1, u2 = u1 / nrm, u2 / nrm
                k1 = (k1[0] / nrm, k1[1] / nrm)
                sigma += math.log(nrm)
            if record:
                nodes.append((x, u1, u2, sigma))
            if last:
                break
            fac = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
            h *= fac
        else:
            rej += 1
            h *= max(0.1, 0.9 * err ** -0.2)
            if h < hmin:
                raise StepSizeUnderflow(f"step size underflow at x={x!r} (h={h:.3g}); coefficient singularity?", x)
    info.update(steps=steps, rejections=rej, sign_changes=changes, h=h)
    return u1, u2, sigma, info


def integrate_scalar(g, x0, t, x1, tol=DEFAULT_TOL, h=None):
    """Propagate the scalar equation ``t' = g(x, t)``; returns ``(t(x1), steps)``."""
    span = x1 - x0
    if span == 0.0:
        return t, 0
    direction = 1.0 if span > 0 else -1.0
    hmin = 1e-14 * max(abs(span), abs(x0), abs(x1), 1e-300)
    k1 = g(x0, t)
    if h is None:
        h = _initial_step(abs(k1), 1.0, span, tol)
    h = min(abs(h), abs(span))
    x = x0
    steps = 0
    while True:
        remaining = (x1 - x) * direction
        if remaining <= 0:
            break
        hmax = _max_step(x)
        if h > hmax:
            h = hmax
        last = h >= remaining
        if last:
            h = remaining
        hs = h * direction
        k2 = g(x + _C2 * hs, t + hs * _A21 * k1)
        k3 = g(x + _C3 * hs, t + hs * (_A31 * k1 + _A32 * k2))
        k4 = g(x + _C4 * hs, t + hs * (_A41 * k1 + _A42 * k2 + _A43 * k3))
        k5 = g(x + _C5 * hs, t + hs * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4))
        xn = x1 if last else x + hs
        k6 = g(xn, t + hs * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5))
        v = t + hs * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
        k7 = g(xn, v)
        err = abs(hs * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7)) / tol
        if err != err:
            err = 1e10
        if err <= 1.0:
            steps += 1
            x, t, k1 = xn, v, k7
            if last:
                break
            h *= 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        else:
            h *= max(0.1, 0.9 * err ** -0.2)
            if h < hmin:
                raise StepSizeUnderflow(f"step size underflow at x={x!r} (h={h:.3g}); coefficient singularity?", x)
    return t, steps


# --- public operations --------------------------------------------------------------


def _check_inside(spec, x):
    if not (spec.a <= x <= spec.b) or not math.isfinite(x):
        raise ValueError(f"position {x!r} lies outside the problem interval ({spec.a}, {spec.b})")


def propagate(spec, lam: float, start: State, x_target: float, tol: float = DEFAULT_TOL) -> State:
    """Propagate ``start`` to ``x_target`` (either direction) at spectral parameter ``lam``."""
    _check_inside(spec, start.x)
    _check_inside(spec, x_target)
    f = vector_rhs(spec, lam)
    u1, u2, sigma, _ = integrate_vector(f, start.x, float(start.u[0]), float(start.u[1]), start.sigma,
                                        x_target, tol)
    return State(x_target, (u1, u2), sigma)


def trajectory(spec, lam: float, start: State, xs, tol: float = DEFAULT_TOL, record: bool = False) -> Trajectory:
    """States at the strictly monotone output points ``xs``.

    With ``record`` the accepted integrator nodes are kept in ``nodes`` as
    :class:`State` objects (including ``start``).
    """
    xs = [float(v) for v in xs]
    if any((b - a) * (xs[-1] - start.x) <= 0 for a, b in zip([start.x] + xs[:-1], xs)):
        raise ValueError("output positions must be strictly monotone away from the start")
    f = vector_rhs(spec, lam)
    traj = Trajectory([])
    x, u1, u2, sigma = start.x, float(start.u[0]), float(start.u[1]), start.sigma
    h = None
    if record:
        traj.nodes.append(State(x, (u1, u2), sigma))
    for xt in xs:
        _check_inside(spec, xt)
        u1, u2, sigma, info = integrate_vector(f, x, u1, u2, sigma, xt, tol, h, record)
        h = info["h"]
        traj.steps += info["steps"]
        traj.rejections += info["rejections"]
        traj.sign_changes += info["sign_changes"]
        if record:
            traj.nodes.extend(State(*n[:1], (n[1], n[2]), n[3]) for n in info["nodes"][1:])
        x = xt
        traj.states.append(State(x, (u1, u2), sigma))
    return traj


def wronskian(spec, f: State, g: State) -> float:
    """Modified Wronskian ``f1 g2 - f2 g1`` of two states at the same point.

    For SL problems the second component is the quasi-derivative ``p y'``.
    """
    if f.x != g.x:
        raise ValueError(f"Wronskian needs states at the same position, got {f.x!r} and {g.x!r}")
    w = f.u[0] * g.u[1] - f.u[1] * g.u[0]
    if w == 0.0:
        return 0.0
    return w * math.exp(f.sigma + g.sigma)


def prufer_angle(spec, lam: float, x0: float, theta0: float, x1: float, tol: float = DEFAULT_TOL) -> float:
    """Continuous (unfolded) Prufer angle at ``x1`` starting from ``theta0`` at ``x0``."""
    theta, _ = integrate_scalar(prufer_rhs(spec, lam), x0, theta0, x1, tol)
    return theta
