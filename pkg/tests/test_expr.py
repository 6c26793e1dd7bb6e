import math
import pickle

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gapeig.errors import DomainError, ExpressionSyntaxError
from gapeig.expr import CoefficientField, eval_coefficient, eval_constant, evaluate, parse_expression


@pytest.mark.parametrize("text, x, expected", [
    ("x^2", 3.0, 9.0),
    ("2*cos(2*x)", 0.0, 2.0),
    ("2^3^2", 0.0, 512.0),
    ("-2^2", 0.0, -4.0),
    ("(-2)^2", 0.0, 4.0),
    ("1 - 2 - 3", 0.0, -4.0),
    ("8 / 4 / 2", 0.0, 1.0),
    ("2 + 3*4", 0.0, 14.0),
    ("-x", 1.5, -1.5),
    ("pi", 0.0, math.pi),
    ("1.5e-3*x", 2.0, 3e-3),
    ("sqrt(abs(x)) + tanh(0) + cosh(0) + sinh(0)", -4.0, 3.0),
    ("exp(log(x))", 2.5, 2.5),
    ("tan(x) - sin(x)/cos(x)", 0.3, 0.0),
])
def test_evaluation_examples(text, x, expected):
    assert eval_coefficient(CoefficientField(text), x) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("text, x", [("1/x", 0.0), ("sqrt(x)", -1.0), ("log(x)", 0.0), ("x^-1", 0.0),
                                     ("(-1)^x", 0.5), ("exp(x)", 1e4)])
def test_domain_errors_name_the_subexpression(text, x):
    fld = CoefficientField(text)
    with pytest.raises(DomainError) as exc:
        eval_coefficient(fld, x)
    assert exc.value.subexpression
    # the compiled fast path must fail the same way
    with pytest.raises(DomainError):
        fld(x)


def test_division_error_reports_the_division():
    with pytest.raises(DomainError) as exc:
        CoefficientField("2 + 1/x").evaluate(0.0)
    assert "/" in exc.value.subexpression and exc.value.x == 0.0


def test_fast_path_overflow_is_a_domain_error():
    with pytest.raises(DomainError):
        CoefficientField("x^2")(1e200)


@pytest.mark.parametrize("text, pos", [("2*", 2), ("(x", 2), ("x $ 1", 2), ("foo(x)", 0), ("sin x", 4),
                                       ("", 0), ("1 2", 2)])
def test_syntax_errors_report_position(text, pos):
    with pytest.raises(ExpressionSyntaxError) as exc:
        parse_expression(text)
    assert exc.value.position == pos


def test_constant_detection():
    assert CoefficientField("2*pi").is_constant
    assert CoefficientField("2*pi").constant_value() == pytest.approx(2 * math.pi)
    assert not CoefficientField("x - x").is_constant
    assert eval_constant("pi/2") == pytest.approx(math.pi / 2)


def test_pickle_round_trip():
    fld = CoefficientField("2*cos(2*x) - 3*exp(-x^2)")
    back = pickle.loads(pickle.dumps(fld))
    assert back == fld and back(0.7) == fld(0.7)


def test_other_variable():
    fld = CoefficientField("1 + k/2", variable="k")
    assert fld(4.0) == 3.0


FIELDS = ["x^2", "2*cos(2*x) - 3*exp(-x^2)", "2/x^2 - 1/x", "1 - 2*exp(-x^2)", "sqrt(1 + x^2)*tanh(x)"]


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(FIELDS), st.floats(0.01, 50.0))
def test_evaluation_is_pure_and_paths_agree(text, x):
    fld = CoefficientField(text)
    first = fld(x)
    assert fld(x) == first and fld(x) == first
    assert evaluate(fld.node, x) == pytest.approx(first, rel=1e-14, abs=1e-300)
    assert fld.vectorized(np.array([x]))[0] == pytest.approx(first, rel=1e-14, abs=1e-300)
