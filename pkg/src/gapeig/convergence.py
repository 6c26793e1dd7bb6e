"""Truncation studies and the diagnostics built on them.

A study solves H_n for every truncation of a nested sequence, links the
per-n eigenvalues into trajectories, and offers four checks: accumulation
of counts, overlaps of consecutive eigenfunctions, the variational residual
of a glued eigenfunction, and the bound ``count_n <= reference``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .eigen import Shooter, count_in_window, eigenfunction, eigenvalues_in_window
from .errors import GapeigError, ProblemError, TailBoundError
from .ode import DEFAULT_TOL, integrate_vector, vector_rhs
from .problem import EndpointClass, SpectralWindow
from .sampled import from_nodes, quadrature_nodes, weighted_inner, weighted_products
from .truncation import OneSidedLP, build_regular_problem
from .weyl import weyl_tail

CONV_TOL = 1e-7
# cross-n overlaps at the noise floor may wobble by a few ulps
OVERLAP_SLACK = 1e-12
GLUE_TOL = 1e-6


@dataclass
class TruncationResult:
    n: int
    a_n: float
    b_n: float
    count: int | None = None
    eigen: object = None
    eigenfunctions: dict = field(default_factory=dict)
    error: str | None = None
    rp: object = None

    @property
    def ok(self) -> bool:
        return self.error is None and self.count is not None


@dataclass
class EigenTrajectory:
    """One eigenvalue followed across truncations: ``values[i]`` belongs to truncation ``ns[i]``."""

    ns: list
    values: list
    slots: list
    converged: bool = False
    overlaps: list = field(default_factory=list)

    @property
    def limit(self) -> float:
        return self.values[-1]

    @property
    def increments(self):
        return [abs(b - a) for a, b in zip(self.values, self.values[1:])]


@dataclass
class StudyResult:
    spec: object
    scheme: object
    window: SpectralWindow
    truncations: list
    tol: float
    conv_tol: float
    per_n: list
    trajectories: list

    @property
    def counts(self):
        return [r.count for r in self.per_n]

    @property
    def errors(self):
        return {r.n: r.error for r in self.per_n if r.error is not None}

    @property
    def limits(self):
        return [t.limit for t in self.trajectories if t.converged]


def _workers(workers):
    if workers is None:
        env = os.environ.get("GAPEIG_THREADS")
        workers = int(env) if env else 1
    return max(1, int(workers))


def solve_truncation(spec, scheme, window, a_n, b_n, tol=DEFAULT_TOL, eigen=True, eigenfunctions=True,
                     n=0, strict=False) -> TruncationResult:
    """Build and solve one H_n.

    Numerical failures are recorded on the result, or raised with ``strict``.
    """
    return _solve_one((spec, scheme, window, n, a_n, b_n, tol, eigen, eigen and eigenfunctions), strict)


def _solve_one(job, strict=False):
    spec, scheme, window, n, a_n, b_n, tol, eigen, with_functions = job
    if not isinstance(window, SpectralWindow):
        window = SpectralWindow(*window)
    res = TruncationResult(n, a_n, b_n)
    try:
        rp = build_regular_problem(spec, scheme, window, a_n, b_n, tol)
        res.rp = rp
        sh = Shooter(rp, tol)
        if eigen:
            el = eigenvalues_in_window(rp, window, tol, shooter=sh)
            res.eigen = el
            res.count = len(el)
            if with_functions:
                for i, lam in enumerate(el):
                    res.eigenfunctions[i] = eigenfunction(rp, lam, tol)
        else:
            res.count = count_in_window(rp, window, tol, shooter=sh)
    except GapeigError as exc:
        # configuration errors are not per-truncation failures
        if strict or exc.exit_code != 2:
            raise
        res.error = f"{type(exc).__name__}: {exc}"
    return res


def _check_truncations(truncations):
    if len(truncations) < 3:
        raise ProblemError(f"a study needs at least 3 truncations, got {len(truncations)}")
    for (a0, b0), (a1, b1) in zip(truncations, truncations[1:]):
        if a1 > a0 or b1 < b0:
            raise ProblemError("truncations must be nested: a_n nonincreasing and b_n nondecreasing")


def match_trajectories(per_n_values, conv_tol: float, window_width: float = math.inf):
    """Link eigenvalues across consecutive truncations by guarded nearest neighbour.

    ``per_n_values`` holds one sorted sequence per truncation (``None`` for a
    failed truncation, which is skipped).  Two values pair only when closer
    than half the smallest spacing within either list; unpaired values start
    new trajectories.
    """
    trajs: list[EigenTrajectory] = []
    prev_n, prev_vals, active = None, None, {}
    for n, vals in enumerate(per_n_values):
        if vals is None:
            continue
        vals = list(vals)
        new_active = {}
        used = set()
        if prev_vals:
            spacing = [b - a for seq in (prev_vals, vals) for a, b in zip(seq, seq[1:])]
            guard = 0.5 * min(spacing) if spacing else 0.5 * window_width
            pairs = sorted((abs(v - w), i, j) for i, w in enumerate(prev_vals) for j, v in enumerate(vals)
                           if abs(v - w) < guard and i in active)
            taken = set()
            for _, i, j in pairs:
                if i in taken or j in used:
                    continue
                taken.add(i)
                used.add(j)
                t = active[i]
                t.ns.append(n)
                t.values.append(vals[j])
                t.slots.append(j)
                new_active[j] = t
        for j, v in enumerate(vals):
            if j not in used:
                t = EigenTrajectory([n], [v], [j])
                trajs.append(t)
                new_active[j] = t
        prev_n, prev_vals, active = n, vals, new_active
    for t in trajs:
        inc = t.increments
        t.converged = (prev_n is not None and t.ns[-1] == prev_n and len(inc) >= 2
                       and inc[-1] < conv_tol and inc[-2] < conv_tol)
    trajs.sort(key=lambda t: t.values[-1])
    return trajs


def run_study(spec, scheme, window, truncations, tol: float = DEFAULT_TOL, conv_tol: float = CONV_TOL,
              eigen: bool = True, eigenfunctions: bool = True, workers: int | None = None) -> StudyResult:
    """Solve every truncation and assemble trajectories and overlaps.

    Numerical failures at one truncation are recorded on its entry and the
    study continues; input errors are raised.  With ``eigen=False`` only counts are computed.
    """
    if not isinstance(window, SpectralWindow):
        window = SpectralWindow(*window)
    truncations = [(float(a), float(b)) for a, b in truncations]
    _check_truncations(truncations)
    jobs = [(spec, scheme, window, n, a, b, tol, eigen, eigen and eigenfunctions)
            for n, (a, b) in enumerate(truncations)]
    nw = _workers(workers)
    if nw > 1:
        with ProcessPoolExecutor(max_workers=min(nw, len(jobs))) as pool:
            per_n = list(pool.map(_solve_one, jobs))
    else:
        per_n = [_solve_one(j) for j in jobs]
    trajs = []
    if eigen:
        seqs = [r.eigen.values.tolist() if r.ok else None for r in per_n]
        trajs = match_trajectories(seqs, conv_tol, window.lambda1 - window.lambda0)
    study = StudyResult(spec, scheme, window, truncations, tol, conv_tol, per_n, trajs)
    if eigen and eigenfunctions:
        for t, ov in zip(trajs, projection_overlap(study)):
            t.overlaps = ov
    return study


# --- accumulation -----------------------------------------------------------------


@dataclass(frozen=True)
class AccumulationVerdict:
    verdict: str
    counts: tuple
    threshold: int

    @property
    def final_count(self):
        return self.counts[-1] if self.counts else None


def detect_accumulation(study: StudyResult, threshold: int | None = None) -> AccumulationVerdict:
    """``Stable`` when the last two counts agree; ``Accumulating`` when counts
    never decrease, are still growing, and end above ``threshold`` (default:
    the first count); ``Inconclusive`` otherwise."""
    counts = tuple(c for c in study.counts if c is not None)
    if not counts:
        return AccumulationVerdict("Inconclusive", counts, 0 if threshold is None else threshold)
    thr = counts[0] if threshold is None else int(threshold)
    if len(counts) >= 2 and counts[-1] == counts[-2]:
        verdict = "Stable"
    elif all(b >= a for a, b in zip(counts, counts[1:])) and counts[-1] > thr:
        verdict = "Accumulating"
    else:
        verdict = "Inconclusive"
    return AccumulationVerdict(verdict, counts, thr)


# --- overlaps ---------------------------------------------------------------------


def eigenfunction_overlap(spec, f, g) -> float:
    """``|<f, g>_r|`` of two normalized, zero-extended eigenfunctions."""
    return abs(weighted_inner(spec, f.function, g.function))


def projection_overlap(study: StudyResult):
    """Consecutive-truncation overlaps for every trajectory."""
    out = []
    for t in study.trajectories:
        ov = []
        for (n0, s0), (n1, s1) in zip(zip(t.ns, t.slots), zip(t.ns[1:], t.slots[1:])):
            f = study.per_n[n0].eigenfunctions.get(s0)
            g = study.per_n[n1].eigenfunctions.get(s1)
            ov.append(math.nan if f is None or g is None else eigenfunction_overlap(study.spec, f, g))
        out.append(ov)
    return out


def overlaps_monotone(overlaps, slack: float = OVERLAP_SLACK) -> bool:
    return all(b >= a - slack for a, b in zip(overlaps, overlaps[1:]))


# --- variational residual check ------------------------------------------------------


@dataclass(frozen=True)
class Piece:
    """``coef * function`` where ``function`` solves ``tau f = lam f`` on its support."""

    coef: float
    lam: float
    function: object
    label: str


@dataclass(frozen=True)
class ExtendedEigenfunction:
    """Inner eigenfunction of H_n glued to scaled Weyl tails.

    The glued function is the sum of its pieces; pieces overlap only at
    glue points, and every piece solves its own eigen-equation, so
    ``(tau - mu) psi`` is the same sum with coefficients ``coef (lam - mu)``.
    """

    inner: object
    gamma_a: float
    gamma_b: float
    left_tail: object
    right_tail: object
    pieces: tuple
    continuity_defect: float
    tail_bound: float

    @property
    def glued(self) -> bool:
        return self.continuity_defect <= GLUE_TOL

    def breaks(self):
        return np.unique(np.concatenate([p.function.x for p in self.pieces]))

    def evaluate(self, xs, mu: float | None = None):
        out = np.zeros((np.size(xs), 2))
        for p in self.pieces:
            c = p.coef if mu is None else p.coef * (p.lam - mu)
            if c != 0.0:
                out += c * p.function(xs)
        return out


def _cross_defect(w, d):
    nw = float(np.hypot(*w))
    if nw == 0.0:
        return 0.0
    return abs(w[0] * d[1] - w[1] * d[0]) / (nw * float(np.hypot(*d)))


def _lp_side(spec, side, x):
    return not (spec.endpoint_class(side) is EndpointClass.REGULAR and x == spec.endpoint(side))


def extend_eigenfunction(rp, ef, tol: float = DEFAULT_TOL, mu: float | None = None) -> ExtendedEigenfunction:
    """Glue ``ef`` to Weyl tails so the result lies in the maximal domain.

    ``mu`` is the spectral parameter for tails of a Dirichlet truncation,
    which has no generating solutions of its own.
    """
    spec = rp.spec
    if mu is None:
        mu = rp.window.midpoint if rp.window is not None else ef.lam
    inner = ef.function
    pieces = [Piece(1.0, ef.lam, inner, "inner")]
    defect, bound = 0.0, 0.0
    gamma_a = gamma_b = 0.0
    left_tail = right_tail = None
    w_a, w_b = inner.values[0], inner.values[-1]

    if _lp_side(spec, "left", rp.a_n):
        lam_u = rp.u_lambda if rp.u_lambda is not None else mu
        left_tail = weyl_tail(spec, "left", lam_u, rp.a_n, tol)
        d = left_tail.direction
        gamma_a = float(w_a @ d)
        defect = max(defect, _cross_defect(w_a, d))
        bound += gamma_a**2 * left_tail.tail_bound
        pieces.append(Piece(gamma_a, lam_u, left_tail.function, "left tail"))

    if isinstance(rp.scheme, OneSidedLP):
        lam_e = rp.v_lambda
        f = vector_rhs(spec, lam_e)
        start = rp.provenance["v_start"]
        _, _, _, info = integrate_vector(f, rp.a_n, start.u[0], start.u[1], 0.0, rp.b_n, tol, record=True)
        v_inner = from_nodes(f, info["nodes"], -1)
        d = v_inner.values[-1]
        gamma_b = float(w_b @ d)
        defect = max(defect, _cross_defect(w_b, d))
        pieces.append(Piece(-gamma_b, lam_e, v_inner, "v inner"))
        if _lp_side(spec, "left", rp.a_n):
            vt = weyl_tail(spec, "left", lam_e, rp.a_n, tol)
            start_vec = v_inner.values[0]
            scale = float(np.hypot(*start_vec)) * (1.0 if vt.direction @ start_vec >= 0 else -1.0)
            pieces.append(Piece(-gamma_b * scale, lam_e, vt.function, "v left tail"))
            bound += (gamma_b * scale) ** 2 * vt.tail_bound
    elif _lp_side(spec, "right", rp.b_n):
        lam_v = rp.v_lambda if rp.v_lambda is not None else mu
        right_tail = weyl_tail(spec, "right", lam_v, rp.b_n, tol)
        d = right_tail.direction
        gamma_b = float(w_b @ d)
        defect = max(defect, _cross_defect(w_b, d))
        bound += gamma_b**2 * right_tail.tail_bound
        pieces.append(Piece(gamma_b, lam_v, right_tail.function, "right tail"))
    return ExtendedEigenfunction(ef, gamma_a, gamma_b, left_tail, right_tail, tuple(pieces), float(defect),
                                 float(bound))


@dataclass(frozen=True)
class ResidualCheck:
    passed: bool
    ratio: float
    lam: float
    mu: float
    half_width: float
    continuity_defect: float
    tail_bound: float
    norm: float

    def __bool__(self):
        return self.passed


def residual_window_check(spec, rp, lambda_k: float, window, quad_tol: float = DEFAULT_TOL,
                          tol: float | None = None) -> ResidualCheck:
    """Test ``||(tau - mu) psi|| < h ||psi||`` for the glued extension ``psi``.

    ``mu`` and ``h`` are the window midpoint and half-width.  If the inner
    eigenfunction cannot be glued to the Weyl tails (its boundary values are
    not on the Weyl lines, as for Dirichlet truncation) no ``psi`` in the
    maximal domain exists of this form and the ratio is reported as
    infinite.
    """
    if not isinstance(window, SpectralWindow):
        window = SpectralWindow(*window)
    tol = DEFAULT_TOL if tol is None else tol
    mu, h = window.midpoint, window.half_width
    ef = eigenfunction(rp, lambda_k, tol)
    ext = extend_eigenfunction(rp, ef, quad_tol, mu)
    xs, ws = quadrature_nodes(ext.breaks())
    psi = ext.evaluate(xs)
    res = ext.evaluate(xs, mu)
    norm2 = float(np.sum(ws * weighted_products(spec, xs, psi, psi)))
    res2 = float(np.sum(ws * weighted_products(spec, xs, res, res)))
    rel_bound = ext.tail_bound / norm2 if norm2 > 0 else math.inf
    if rel_bound > math.sqrt(quad_tol):
        raise TailBoundError(f"tail mass bound {rel_bound:.3g} relative to the norm is not controllable")
    if not ext.glued:
        ratio = math.inf
    else:
        ratio = math.sqrt(res2 / norm2) / h
    return ResidualCheck(ratio < 1.0, ratio, float(lambda_k), mu, h, ext.continuity_defect, rel_bound,
                         math.sqrt(norm2))


# --- count bound -----------------------------------------------------------------


@dataclass(frozen=True)
class MonotonicityCheck:
    passed: bool
    reference_count: int
    per_n: tuple

    @property
    def violations(self):
        return [n for n, _, ok in self.per_n if not ok]


def count_monotonicity_check(study: StudyResult, reference_count: int) -> MonotonicityCheck:
    """``count_n <= reference_count`` at every truncation; a failed truncation counts as a failure."""
    rows = tuple((r.n, r.count, r.count is not None and r.count <= reference_count) for r in study.per_n)
    return MonotonicityCheck(all(ok for _, _, ok in rows), int(reference_count), rows)


__all__ = [
    "AccumulationVerdict", "EigenTrajectory", "ExtendedEigenfunction", "MonotonicityCheck", "Piece",
    "ResidualCheck", "StudyResult", "TruncationResult", "count_monotonicity_check", "detect_accumulation",
    "eigenfunction_overlap", "extend_eigenfunction", "match_trajectories", "overlaps_monotone",
    "projection_overlap", "residual_window_check", "run_study", "solve_truncation",
]
