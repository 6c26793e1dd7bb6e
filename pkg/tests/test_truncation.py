import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapeig.catalog import catalog
from gapeig.eigen import eigenfunction, eigenvalues_in_window, prufer_count
from gapeig.errors import ProblemError, SchemeMismatch
from gapeig.ode import State
from gapeig.problem import SpectralWindow, make_problem
from gapeig.truncation import (NaiveDirichlet, OneSidedLP, RegularProblem, TwoSidedWeyl, bc_angle_from_state,
                               build_regular_problem, describe_scheme, parse_scheme, truncation_sequence)
from gapeig.weyl import projective_distance

HALF_OSC = make_problem("sl", (0.0, math.inf), {"p": "1", "q": "x^2", "r": "1"}, 0.0, "lp", name="half")


def test_bc_angle_examples():
    assert bc_angle_from_state(State(0.0, (0.0, 1.0))) == 0.0
    assert bc_angle_from_state(State(0.0, (1.0, 0.0))) == pytest.approx(math.pi / 2)
    assert bc_angle_from_state(State(0.0, (2.0, 2.0))) == bc_angle_from_state(State(0.0, (1.0, 1.0)))
    with pytest.raises(ValueError):
        bc_angle_from_state(State(0.0, (0.0, 0.0)))


@settings(max_examples=100, deadline=None)
@given(st.floats(-10, 10), st.floats(-10, 10))
def test_bc_angle_satisfied_by_its_state(u1, u2):
    if math.hypot(u1, u2) < 1e-6:
        return
    a = bc_angle_from_state((u1, u2))
    assert 0.0 <= a < math.pi
    n = math.hypot(u1, u2)
    assert abs(math.cos(a) * u1 / n + math.sin(a) * u2 / n) < 1e-12


def test_one_sided_needs_limit_point_right_end():
    with pytest.raises(SchemeMismatch):
        build_regular_problem(catalog("dirichlet_box"), OneSidedLP(), SpectralWindow(0.5, 4.5), 0.0, math.pi)


def test_naive_angles_are_zero():
    for window in (SpectralWindow(0.0, 6.5), SpectralWindow(-3.0, -1.0)):
        rp = build_regular_problem(catalog("harmonic"), NaiveDirichlet(), window, -5.0, 5.0)
        assert rp.alpha_n == rp.beta_n == 0.0


@pytest.mark.parametrize("L", [2.0, 3.5, 6.0])
def test_two_sided_at_true_eigenvalue_is_exact(L):
    rp = build_regular_problem(catalog("harmonic"), TwoSidedWeyl(1.0, 1.0), SpectralWindow(0.0, 6.5), -L, L)
    assert eigenfunction(rp, 1.0).residual < 1e-8


@pytest.mark.parametrize("name, scheme, window, a_n, b_n", [
    ("harmonic", TwoSidedWeyl(), (0.0, 6.5), -6.0, 5.0),
    ("harmonic", OneSidedLP(2.0, "lambda1"), (0.0, 6.5), -6.0, 6.0),
    ("coulomb_l1", OneSidedLP(), (-0.07, -0.012), 0.05, 100.0),
    ("mathieu_impurity", TwoSidedWeyl(0.3, 1.2), (0.1, 1.6), -12.0, 15.0),
    ("dirac_well", OneSidedLP(None, "lambda0"), (-0.9, 0.9), -10.0, 10.0),
    ("dirichlet_box", TwoSidedWeyl(), (0.5, 4.5), 0.2, 3.0),
])
def test_generating_solution_consistency(name, scheme, window, a_n, b_n):
    rp = build_regular_problem(catalog(name), scheme, SpectralWindow(*window), a_n, b_n)
    for state, angle in ((rp.u_state, rp.alpha_n), (rp.v_state, rp.beta_n)):
        d = state.direction()
        assert abs(math.cos(angle) * d[0] + math.sin(angle) * d[1]) < 1e-12
    assert 0.0 <= rp.alpha_n < math.pi and 0.0 <= rp.beta_n < math.pi


@pytest.mark.parametrize("name, window, a1, a2, b", [
    ("harmonic", (0.0, 6.5), -5.0, -7.0, 4.0),
    ("mathieu_impurity", (0.1, 1.6), -10.0, -16.0, 8.0),
    ("coulomb_l1", (-0.07, -0.012), 0.5, 0.05, 40.0),
])
@pytest.mark.parametrize("edge", ["lambda0", "lambda1"])
def test_nesting_independence(name, window, a1, a2, b, edge):
    spec = catalog(name)
    tol = 1e-10
    w = SpectralWindow(*window)
    r1 = build_regular_problem(spec, OneSidedLP(None, edge), w, a1, b, tol)
    r2 = build_regular_problem(spec, OneSidedLP(None, edge), w, a2, b, tol)
    assert projective_distance(r1.v_state.direction(), r2.v_state.direction()) < 10 * tol


@pytest.mark.parametrize("edge, lam_edge", [("lambda0", 2.0), ("lambda1", 6.0)])
def test_edge_eigenvalue_at_regular_left_end(edge, lam_edge):
    # -y'' + x^2 y on (0, inf) with y(0) = 0 has eigenvalues 3, 7, 11, ...
    w = SpectralWindow(2.0, 6.0)
    rp = build_regular_problem(HALF_OSC, OneSidedLP(4.0, edge), w, 0.0, 5.0)
    assert prufer_count(rp, lam_edge + 1e-6) == prufer_count(rp, lam_edge - 1e-6) + 1
    el = eigenvalues_in_window(rp, w)
    assert any(abs(v - lam_edge) < 1e-8 for v in el.edge_values)
    assert lam_edge not in el.values.tolist()


def test_lambda_outside_window_rejected():
    with pytest.raises(ProblemError):
        build_regular_problem(catalog("harmonic"), TwoSidedWeyl(7.0, 7.0), SpectralWindow(0.0, 6.5), -4, 4)


def test_regular_problem_invariants():
    spec = catalog("dirichlet_box")
    with pytest.raises(ProblemError):
        RegularProblem(spec, 1.0, 1.0, 0.0, 0.0)
    with pytest.raises(ProblemError):
        RegularProblem(spec, -0.5, 1.0, 0.0, 0.0)
    rp = RegularProblem(spec, 0.0, math.pi, 0.0, 0.0)
    assert rp.with_angles(alpha_n=math.pi).alpha_n == 0.0


@pytest.mark.parametrize("text", ["two-sided", "two-sided:1.5", "two-sided:1,2", "one-sided",
                                  "one-sided:lambda1", "one-sided:lambda0:3.25", "dirichlet"])
def test_scheme_text_round_trip(text):
    sch = parse_scheme(text)
    again = parse_scheme(describe_scheme(sch))
    assert again == sch


def test_bad_scheme_text():
    with pytest.raises(ValueError):
        parse_scheme("sideways")
    with pytest.raises(ValueError):
        parse_scheme("one-sided:lambda2")


@pytest.mark.parametrize("name", ["harmonic", "coulomb_l1", "dirichlet_box"])
def test_truncation_sequence_is_nested(name):
    spec = catalog(name)
    seq = truncation_sequence(spec, 6)
    for (a0, b0), (a1, b1) in zip(seq, seq[1:]):
        assert a1 <= a0 and b1 >= b0
    for a, b in seq:
        assert spec.a <= a < b <= spec.b
