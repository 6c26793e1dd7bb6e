import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapeig.catalog import catalog, names
from gapeig.errors import ExpressionSyntaxError, ProblemError, UnknownCatalogEntry
from gapeig.problem import (EndpointClass, Kind, SpectralWindow, make_problem, normalize_angle, parse_problem,
                            probe_mesh, render_problem, validate)

BOX = """
[problem]
kind = sl
interval = (0, pi)
p = 1
q = 0
r = 1
left = regular:0
right = regular:0
"""


def test_parse_dirichlet_box():
    spec = parse_problem(BOX)
    assert spec.kind is Kind.SL
    assert (spec.a, spec.b) == (0.0, math.pi)
    assert spec.left_class is spec.right_class is EndpointClass.REGULAR
    assert spec.left_bc_angle == spec.right_bc_angle == 0.0


def test_infinite_regular_endpoint_rejected():
    text = BOX.replace("(0, pi)", "(0, inf)")
    with pytest.raises(ProblemError, match="infinite"):
        parse_problem(text)


def test_dirac_asymmetric_q_rejected():
    text = """
    [problem]
    kind = dirac
    interval = (-inf, inf)
    q11 = 1
    q12 = 0.5
    q21 = 0.25
    q22 = -1
    r11 = 1
    r12 = 0
    r22 = 1
    left = lp
    right = lp
    """
    with pytest.raises(ProblemError, match="symmetric"):
        parse_problem(text)


@pytest.mark.parametrize("edit, err", [
    (("r = 1", "r = x - 1"), ProblemError),
    (("p = 1", "p = -1"), ProblemError),
    (("left = regular:0", "left = lc"), ProblemError),
    (("left = regular:0", "left = regular"), ProblemError),
    (("kind = sl", "kind = jacobi"), ProblemError),
    (("q = 0", "q = 0 +"), ExpressionSyntaxError),
    (("q = 0", "q = sqrt(x - 1)"), ProblemError),
    (("q = 0", "q = 0\nq = 1"), ProblemError),
    (("q = 0", "q = 0\nzeta = 1"), ProblemError),
    (("interval = (0, pi)", "interval = 0, pi"), ExpressionSyntaxError),
    (("interval = (0, pi)", "interval = (pi, 0)"), ProblemError),
])
def test_invalid_files(edit, err):
    with pytest.raises(err):
        parse_problem(BOX.replace(*edit))


def test_lp_endpoint_may_not_carry_angle():
    from gapeig.expr import CoefficientField
    from gapeig.problem import ProblemSpec
    coeffs = {k: CoefficientField("1") for k in ("p", "q", "r")}
    spec = ProblemSpec(Kind.SL, 0.0, 1.0, coeffs, EndpointClass.LIMIT_POINT, EndpointClass.REGULAR, 0.0, 0.0)
    with pytest.raises(ProblemError, match="limit point"):
        validate(spec)


def test_window_invariant():
    with pytest.raises(ProblemError):
        SpectralWindow(1.0, 1.0)
    w = SpectralWindow(0.0, 6.5)
    assert w.midpoint == 3.25 and w.half_width == 3.25 and 1.0 in w and 0.0 not in w


def test_normalize_angle():
    assert normalize_angle(math.pi) == 0.0
    assert normalize_angle(-math.pi / 4) == pytest.approx(3 * math.pi / 4)
    assert 0 <= normalize_angle(7.0) < math.pi


def test_catalog_examples():
    h = catalog("harmonic")
    assert h.left_class is h.right_class is EndpointClass.LIMIT_POINT
    assert h.coefficient("q")(2.0) == 4.0
    box = catalog("dirichlet_box")
    assert (box.left_class, box.left_bc_angle, box.right_bc_angle) == (EndpointClass.REGULAR, 0.0, 0.0)
    with pytest.raises(UnknownCatalogEntry, match="harmonic"):
        catalog("nosuch")


@pytest.mark.parametrize("name", names())
def test_catalog_invariants_on_1000_points(name):
    validate(catalog(name), n_probe=1000)


def test_probe_mesh_is_interior_and_sorted():
    for a, b in [(0.0, 1.0), (-math.inf, math.inf), (0.0, math.inf), (-math.inf, 2.0)]:
        xs = probe_mesh(a, b, 100)
        assert np.all(np.diff(xs) > 0) and np.all(xs > a) and np.all(xs < b)


@pytest.mark.parametrize("name", names())
def test_render_round_trip(name):
    spec = catalog(name)
    back = parse_problem(render_problem(spec))
    rng = np.random.default_rng(7)
    lo = spec.a if math.isfinite(spec.a) else -20.0
    hi = spec.b if math.isfinite(spec.b) else 20.0
    xs = rng.uniform(lo, hi, 100)
    xs = xs[(xs > spec.a) & (xs < spec.b)]
    for key, fld in spec.coefficients.items():
        for x in xs:
            assert back.coefficient(key)(x) == pytest.approx(fld(x), rel=1e-12, abs=1e-12)
    assert (back.a, back.b, back.left_class, back.right_class) == (spec.a, spec.b, spec.left_class,
                                                                    spec.right_class)
    assert back.left_bc_angle == spec.left_bc_angle and back.right_bc_angle == spec.right_bc_angle


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 3.14), st.floats(0.1, 5.0), st.floats(-3.0, 3.0))
def test_random_round_trip(alpha, c, shift):
    spec = make_problem("sl", (0.0, math.inf), {"p": f"{c!r} + x^2", "q": f"{shift!r}*exp(-x)", "r": "1"},
                        alpha, "lp")
    back = parse_problem(render_problem(spec))
    assert back.left_bc_angle == spec.left_bc_angle
    for x in (0.1, 1.0, 7.5):
        assert back.coefficient("p")(x) == spec.coefficient("p")(x)
        assert back.coefficient("q")(x) == spec.coefficient("q")(x)
