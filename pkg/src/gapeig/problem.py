"""Operator definitions: Sturm-Liouville and Dirac problems, spectral windows,
and the line-oriented problem-file format."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ExpressionSyntaxError, ProblemError
from .expr import CoefficientField, eval_constant


class Kind(str, enum.Enum):
    SL = "sl"
    DIRAC = "dirac"


class EndpointClass(str, enum.Enum):
    REGULAR = "regular"
    LIMIT_POINT = "lp"


SL_FIELDS = ("p", "q", "r")
DIRAC_FIELDS = ("q11", "q12", "q22", "r11", "r12", "r22")


def normalize_angle(alpha: float) -> float:
    """Reduce a boundary-condition angle to [0, pi)."""
    a = math.fmod(alpha, math.pi)
    if a < 0:
        a += math.pi
    if a >= math.pi:
        a -= math.pi
    return a


@dataclass(frozen=True)
class SpectralWindow:
    lambda0: float
    lambda1: float

    def __post_init__(self):
        if not (self.lambda0 < self.lambda1):
            raise ProblemError(f"spectral window needs lambda0 < lambda1, got ({self.lambda0}, {self.lambda1})")

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lambda0 + self.lambda1)

    @property
    def half_width(self) -> float:
        return 0.5 * (self.lambda1 - self.lambda0)

    def __contains__(self, lam) -> bool:
        return self.lambda0 < lam < self.lambda1


@dataclass(frozen=True)
class ProblemSpec:
    """A Sturm-Liouville expression (1/r)(-(p y')' + q y) or a Dirac system
    (1/r)(i sigma_2 d/dx + q) on (a, b).

    ``coefficients`` maps field names (``p, q, r`` or ``q11 .. r22``) to
    :class:`CoefficientField`.  Boundary-condition angles are present exactly
    for Regular endpoints.  A condition with angle ``alpha`` at ``x`` reads
    ``cos(alpha) u1(x) + sin(alpha) u2(x) = 0`` where ``(u1, u2)`` is
    ``(y, p y')`` or ``(psi1, psi2)``.
    """

    kind: Kind
    a: float
    b: float
    coefficients: dict
    left_class: EndpointClass
    right_class: EndpointClass
    left_bc_angle: float | None = None
    right_bc_angle: float | None = None
    name: str = ""
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def is_dirac(self) -> bool:
        return self.kind is Kind.DIRAC

    def coefficient(self, key: str) -> CoefficientField:
        return self.coefficients[key]

    def endpoint(self, side: str) -> float:
        return self.a if side == "left" else self.b

    def endpoint_class(self, side: str) -> EndpointClass:
        return self.left_class if side == "left" else self.right_class

    def bc_angle(self, side: str):
        return self.left_bc_angle if side == "left" else self.right_bc_angle

    def sl_functions(self):
        """Fast scalar callables ``(p, q, r)``."""
        c = self.coefficients
        return c["p"], c["q"], c["r"]

    def dirac_functions(self):
        c = self.coefficients
        return tuple(c[k] for k in DIRAC_FIELDS)

    def weight(self, xs):
        """Vectorized weight: r(x) for SL, the 2x2 matrix arrays (r11, r12, r22) for Dirac."""
        c = self.coefficients
        if self.is_dirac:
            return c["r11"].vectorized(xs), c["r12"].vectorized(xs), c["r22"].vectorized(xs)
        return c["r"].vectorized(xs)

    def potential_profile(self, xs):
        """Scalar potential-like quantity used to place shooting match points."""
        c = self.coefficients
        if self.is_dirac:
            return 0.5 * (c["q11"].vectorized(xs) + c["q22"].vectorized(xs))
        return c["q"].vectorized(xs) / c["r"].vectorized(xs)

    def with_interval(self, a, b):
        """Copy with a new interval; classifications are kept."""
        return ProblemSpec(self.kind, a, b, dict(self.coefficients), self.left_class, self.right_class,
                           self.left_bc_angle, self.right_bc_angle, self.name)


def probe_mesh(a: float, b: float, n: int) -> np.ndarray:
    """``n`` interior points of (a, b); infinite ends are reached through an algebraic map."""
    t = (np.arange(n) + 0.5) / n
    if math.isfinite(a) and math.isfinite(b):
        return a + (b - a) * t
    if math.isfinite(a):
        s = np.minimum(t, 1 - 1e-6)
        return a + s / (1 - s) * max(1.0, abs(a))
    if math.isfinite(b):
        s = np.maximum(t, 1e-6)
        return b - (1 - s) / s * max(1.0, abs(b))
    s = np.clip(2 * t - 1, -1 + 1e-6, 1 - 1e-6)
    return s / (1 - s * s)


def _regular_approach_points(spec, side):
    a, b = spec.a, spec.b
    if side == "left":
        other = b if math.isfinite(b) else a + 1.0
        return [a + (other - a) * 10.0 ** (-k) for k in range(1, 9)]
    other = a if math.isfinite(a) else b - 1.0
    return [b - (b - other) * 10.0 ** (-k) for k in range(1, 9)]


def validate(spec: ProblemSpec, n_probe: int = 64) -> ProblemSpec:
    """Check the ProblemSpec invariants on a probe mesh; returns ``spec``."""
    if not (spec.a < spec.b):
        raise ProblemError(f"interval needs a < b, got ({spec.a}, {spec.b})")
    for side in ("left", "right"):
        x = spec.endpoint(side)
        cls = spec.endpoint_class(side)
        if cls is EndpointClass.REGULAR:
            if not math.isfinite(x):
                raise ProblemError(f"{side} endpoint {x} is infinite and cannot be Regular")
            if spec.bc_angle(side) is None:
                raise ProblemError(f"{side} endpoint is Regular but has no boundary-condition angle")
            for xp in _regular_approach_points(spec, side):
                for key, fld in spec.coefficients.items():
                    try:
                        v = fld.evaluate(xp)
                    except DomainError as exc:
                        raise ProblemError(f"coefficient {key} not finite near Regular {side} endpoint: {exc}") from None
                    if not math.isfinite(v):
                        raise ProblemError(f"coefficient {key} not finite near Regular {side} endpoint")
        elif spec.bc_angle(side) is not None:
            raise ProblemError(f"{side} endpoint is limit point; a boundary-condition angle is not allowed")
    expected = DIRAC_FIELDS if spec.is_dirac else SL_FIELDS
    missing = [k for k in expected if k not in spec.coefficients]
    if missing:
        raise ProblemError(f"missing coefficients: {', '.join(missing)}")
    xs = probe_mesh(spec.a, spec.b, n_probe)
    vals = {}
    for key, fld in spec.coefficients.items():
        arr = np.empty(len(xs))
        for i, x in enumerate(xs):
            try:
                arr[i] = fld.evaluate(float(x))
            except DomainError as exc:
                raise ProblemError(f"coefficient {key}: {exc}") from None
        vals[key] = arr
    if spec.is_dirac:
        for sym in ("q", "r"):
            lower = f"{sym}21"
            if lower in vals and np.any(np.abs(vals[lower] - vals[f"{sym}12"]) > 1e-12 * (1 + np.abs(vals[f"{sym}12"]))):
                i = int(np.argmax(np.abs(vals[lower] - vals[f"{sym}12"])))
                raise ProblemError(f"{sym} must be symmetric: {sym}12 != {sym}21 at x={xs[i]!r}")
        det = vals["r11"] * vals["r22"] - vals["r12"] ** 2
        bad = np.flatnonzero((vals["r11"] <= 0) | (det <= 0))
        if bad.size:
            raise ProblemError(f"r must be positive definite; fails at x={xs[bad[0]]!r}")
    else:
        for key in ("p", "r"):
            bad = np.flatnonzero(vals[key] <= 0)
            if bad.size:
                raise ProblemError(f"{key} must be positive; {key}({xs[bad[0]]!r}) = {vals[key][bad[0]]!r}")
    return spec


def make_problem(kind, interval, coefficients, left, right, name="", n_probe=64) -> ProblemSpec:
    """Build and validate a problem.

    ``left``/``right`` are ``"lp"`` or an angle (float) for a Regular endpoint.
    """
    kind = Kind(kind)
    coeffs = {k: v if isinstance(v, CoefficientField) else CoefficientField(v) for k, v in coefficients.items()}

    def _cls(e):
        if isinstance(e, str) and e.lower() == "lp":
            return EndpointClass.LIMIT_POINT, None
        return EndpointClass.REGULAR, normalize_angle(float(e))

    lc, la = _cls(left)
    rc, ra = _cls(right)
    spec = ProblemSpec(kind, float(interval[0]), float(interval[1]), coeffs, lc, rc, la, ra, name)
    return validate(spec, n_probe)


# --- problem files ------------------------------------------------------------


def _parse_endpoint_value(text, lineno):
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity", "+infinity"):
        return math.inf
    if t in ("-inf", "-infinity"):
        return -math.inf
    try:
        return eval_constant(text)
    except ExpressionSyntaxError as exc:
        raise ExpressionSyntaxError(f"line {lineno}: bad interval endpoint ({exc})") from None


def _parse_class(text, side, lineno):
    t = text.strip().lower()
    if t == "lp":
        return "lp"
    if t in ("lc",) or t.startswith("lc"):
        raise ProblemError(f"line {lineno}: limit-circle {side} endpoints are not supported")
    if t.startswith("regular"):
        _, sep, angle = text.strip().partition(":")
        if not sep or not angle.strip():
            raise ProblemError(f"line {lineno}: regular {side} endpoint needs an angle, e.g. regular:0")
        try:
            return eval_constant(angle)
        except ExpressionSyntaxError as exc:
            raise ExpressionSyntaxError(f"line {lineno}: bad angle ({exc})") from None
    raise ProblemError(f"line {lineno}: {side} must be 'lp' or 'regular:<angle>', got {text.strip()!r}")


def parse_problem(text: str, n_probe: int = 64) -> ProblemSpec:
    """Parse problem-file contents into a validated :class:`ProblemSpec`.

    Example::

        [problem]
        kind = sl
        interval = (0, pi)
        p = 1
        q = 0
        r = 1
        left = regular:0
        right = regular:0
    """
    section = None
    entries = {}
    where = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ExpressionSyntaxError(f"line {lineno}: unterminated section header", raw, len(raw))
            section = line[1:-1].strip().lower()
            if section != "problem":
                raise ProblemError(f"line {lineno}: unknown section [{section}]")
            continue
        if section is None:
            raise ProblemError(f"line {lineno}: key outside of a [problem] section")
        key, sep, value = line.partition("=")
        if not sep:
            raise ExpressionSyntaxError(f"line {lineno}: expected key=value", raw, 0)
        key = key.strip().lower()
        if key in entries:
            raise ProblemError(f"line {lineno}: duplicate key {key!r}")
        entries[key] = value.strip()
        where[key] = lineno
    if section is None:
        raise ProblemError("no [problem] section found")
    for req in ("kind", "interval", "left", "right"):
        if req not in entries:
            raise ProblemError(f"missing required key {req!r}")
    kind = entries["kind"].lower()
    if kind not in ("sl", "dirac"):
        raise ProblemError(f"line {where['kind']}: kind must be sl or dirac, got {kind!r}")
    iv = entries["interval"].strip()
    if not (iv.startswith("(") and iv.endswith(")")) or iv.count(",") != 1:
        raise ExpressionSyntaxError(f"line {where['interval']}: interval must look like (A,B)", iv, 0)
    lo, hi = iv[1:-1].split(",")
    a = _parse_endpoint_value(lo, where["interval"])
    b = _parse_endpoint_value(hi, where["interval"])
    names = DIRAC_FIELDS + ("q21", "r21") if kind == "dirac" else SL_FIELDS
    allowed = set(names) | {"kind", "interval", "left", "right", "name"}
    for key in entries:
        if key not in allowed:
            raise ProblemError(f"line {where[key]}: unknown key {key!r} for kind={kind}")
    coeffs = {}
    for key in names:
        if key in entries:
            try:
                coeffs[key] = CoefficientField(entries[key])
            except ExpressionSyntaxError as exc:
                raise ExpressionSyntaxError(f"line {where[key]}: {key}: {exc}", exc.text, exc.position) from None
    left = _parse_class(entries["left"], "left", where["left"])
    right = _parse_class(entries["right"], "right", where["right"])
    return make_problem(kind, (a, b), coeffs, left, right, name=entries.get("name", ""), n_probe=n_probe)


def _fmt_endpoint(x):
    if x == math.inf:
        return "inf"
    if x == -math.inf:
        return "-inf"
    return repr(float(x))


def render_problem(spec: ProblemSpec) -> str:
    """Inverse of :func:`parse_problem`."""
    lines = ["[problem]"]
    if spec.name:
        lines.append(f"name = {spec.name}")
    lines.append(f"kind = {spec.kind.value}")
    lines.append(f"interval = ({_fmt_endpoint(spec.a)}, {_fmt_endpoint(spec.b)})")
    for key, fld in spec.coefficients.items():
        lines.append(f"{key} = {fld.text}")
    for side in ("left", "right"):
        if spec.endpoint_class(side) is EndpointClass.REGULAR:
            lines.append(f"{side} = regular:{spec.bc_angle(side)!r}")
        else:
            lines.append(f"{side} = lp")
    return "\n".join(lines) + "\n"
