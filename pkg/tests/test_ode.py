import math

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from gapeig.catalog import catalog
from gapeig.errors import DomainError
from gapeig.ode import RENORM_HIGH, RENORM_LOW, State, derivative, prufer_angle, propagate, trajectory, wronskian
from gapeig.problem import make_problem
from gapeig.weyl import projective_distance

FREE = make_problem("sl", (-math.inf, math.inf), {"p": "1", "q": "0", "r": "1"}, "lp", "lp")
DIRAC_FREE = make_problem("dirac", (-math.inf, math.inf),
                          {"q11": "0", "q12": "0", "q22": "0", "r11": "1", "r12": "0", "r22": "1"}, "lp", "lp")
FIXTURES = ["harmonic", "mathieu_impurity", "dirac_well"]


def test_derivative_examples():
    assert derivative(FREE, 0.0, 0.3, (1.0, 0.0)) == pytest.approx((0.0, 0.0))
    assert derivative(catalog("harmonic"), 1.0, 0.0, (1.0, 0.0)) == pytest.approx((0.0, -1.0))
    assert derivative(DIRAC_FREE, 1.0, 0.0, (1.0, 0.0)) == pytest.approx((0.0, 1.0))


def test_derivative_domain_error():
    with pytest.raises(DomainError):
        derivative(catalog("coulomb_l1"), -0.1, 0.0, (1.0, 0.0))


def test_linear_solution_direction():
    s = propagate(FREE, 0.0, State(0.0, (0.0, 1.0)), 2.0)
    assert projective_distance(s.direction(), (2.0, 1.0)) < 1e-9


def test_exponential_growth_tracked_in_sigma():
    s = propagate(FREE, -1.0, State(0.0, (1.0, 1.0)), 10.0)
    y, dy = s.value()
    assert y == pytest.approx(math.exp(10.0), rel=1e-7)
    assert dy == pytest.approx(math.exp(10.0), rel=1e-7)
    assert RENORM_LOW <= s.norm <= RENORM_HIGH


def test_renormalization_band_along_trajectory():
    spec = catalog("harmonic")
    tr = trajectory(spec, 0.5, State(0.0, (1.0, 0.3)), [2.0, 4.0, 6.0, 8.0], record=True)
    assert tr.states[-1].log_magnitude > 20
    for s in tr.states + tr.nodes[1:]:
        assert RENORM_LOW <= s.norm <= RENORM_HIGH
    xs = [s.x for s in tr.states]
    assert xs == sorted(xs)
    with pytest.raises(ValueError):
        trajectory(spec, 0.5, State(0.0, (1.0, 0.0)), [2.0, 1.0])


def test_backward_propagation_inverts_forward():
    spec = catalog("mathieu_impurity")
    s0 = State(-1.0, (0.6, 0.8))
    s1 = propagate(spec, 0.7, s0, 3.0, 1e-12)
    back = propagate(spec, 0.7, s1, -1.0, 1e-12)
    assert back.value() == pytest.approx(s0.value(), rel=1e-8, abs=1e-9)


@pytest.mark.parametrize("lam", [2.0, 4.2])
def test_halving_tol_halves_direction_error(lam):
    spec = catalog("harmonic")
    start = State(-5.0, (math.cos(0.7), math.sin(0.7)))
    for tol in (1e-7, 1e-8):
        ref = propagate(spec, lam, start, 5.0, tol / 100).direction()
        e1 = projective_distance(propagate(spec, lam, start, 5.0, tol).direction(), ref)
        e2 = projective_distance(propagate(spec, lam, start, 5.0, tol / 2).direction(), ref)
        assert e1 >= 2.0 * e2


def test_wronskian_examples():
    f = State(0.3, (1.0, 0.0))
    g = State(0.3, (0.0, 1.0))
    assert wronskian(FREE, f, g) == 1.0
    assert wronskian(FREE, f, f) == 0.0
    with pytest.raises(ValueError):
        wronskian(FREE, f, State(0.4, (0.0, 1.0)))


def test_wronskian_of_sine_and_cosine():
    sin0, cos0 = State(0.0, (0.0, 1.0)), State(0.0, (1.0, 0.0))
    w0 = wronskian(FREE, sin0, cos0)
    w1 = wronskian(FREE, propagate(FREE, 1.0, sin0, 1.0), propagate(FREE, 1.0, cos0, 1.0))
    assert w0 == -1.0
    assert abs(w1 - w0) < 1e-10


angles = st.floats(0.0, math.pi)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(FIXTURES), st.floats(-0.8, 0.8), angles, angles, st.floats(-3.0, 3.0),
       st.floats(-3.0, 3.0))
def test_wronskian_constancy(name, lam, t1, t2, x1, x2):
    assume(abs(math.sin(t1 - t2)) > 0.05)
    spec = catalog(name)
    tol = 1e-10
    f0 = State(0.0, (math.cos(t1), math.sin(t1)))
    g0 = State(0.0, (math.cos(t2), math.sin(t2)))
    w0 = wronskian(spec, f0, g0)
    wa = wronskian(spec, propagate(spec, lam, f0, x1, tol), propagate(spec, lam, g0, x1, tol))
    wb = wronskian(spec, propagate(spec, lam, f0, x2, tol), propagate(spec, lam, g0, x2, tol))
    assert abs(wa - wb) <= 10 * tol * abs(w0)
    assert abs(wa - w0) <= 10 * tol * abs(w0)


@settings(max_examples=50, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5), st.floats(-3, 3),
       st.floats(-3, 3))
def test_wronskian_antisymmetry(a, b, c, d, s1, s2):
    f, g = State(0.0, (a, b), s1), State(0.0, (c, d), s2)
    assert wronskian(FREE, f, g) == -wronskian(FREE, g, f)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(FIXTURES), st.floats(0.01, 100.0), st.booleans(), angles)
def test_scale_covariance(name, c, negative, theta):
    spec = catalog(name)
    c = -c if negative else c
    s = State(-1.0, (math.cos(theta), math.sin(theta)), 0.5)
    sign = math.copysign(1.0, c)
    sc = s.scaled(c)
    assert sc.value() == pytest.approx(tuple(sign * v for v in s.value()), rel=1e-14, abs=1e-300)
    p, q = propagate(spec, 0.3, s, 2.0), propagate(spec, 0.3, sc, 2.0)
    pv, qv = p.value(), tuple(sign * v for v in q.value())
    mag = math.hypot(*pv)
    assert abs(pv[0] - qv[0]) <= 1e-9 * mag and abs(pv[1] - qv[1]) <= 1e-9 * mag


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(FIXTURES), st.floats(-2, 2), st.floats(-2, 2), angles, angles)
def test_linearity(name, alpha, beta, t1, t2):
    spec = catalog(name)
    tol = 1e-10
    f = (math.cos(t1), math.sin(t1))
    g = (math.cos(t2), math.sin(t2))
    combo = (alpha * f[0] + beta * g[0], alpha * f[1] + beta * g[1])
    if math.hypot(*combo) < 1e-3:
        return
    pf = propagate(spec, 0.4, State(0.0, f), 2.5, tol).value()
    pg = propagate(spec, 0.4, State(0.0, g), 2.5, tol).value()
    pc = propagate(spec, 0.4, State(0.0, combo), 2.5, tol).value()
    mag = abs(alpha) * math.hypot(*pf) + abs(beta) * math.hypot(*pg)
    for k in range(2):
        assert abs(pc[k] - (alpha * pf[k] + beta * pg[k])) <= 10 * tol * mag


def test_prufer_angle_counts_box_zeros():
    box = catalog("dirichlet_box")
    # y = sin(3x) has Prufer angle 3*pi at x = pi when started at 0
    assert prufer_angle(box, 9.0, 0.0, 0.0, math.pi, 1e-12) == pytest.approx(3 * math.pi, abs=1e-8)
