import math

import numpy as np
import pytest

from gapeig.catalog import catalog
from gapeig.eigen import (count_in_window, eigenfunction, eigenvalues_in_window, mismatch, prufer_count)
from gapeig.errors import NotAnEigenvalue
from gapeig.oracle import dense_fd_oracle, fd_eigenvalues
from gapeig.problem import SpectralWindow, make_problem
from gapeig.sampled import SampledFunction, weighted_inner
from gapeig.truncation import OneSidedLP, RegularProblem, TwoSidedWeyl, build_regular_problem

BOX = catalog("dirichlet_box")
BOX_RP = RegularProblem(BOX, 0.0, math.pi, 0.0, 0.0)


def test_box_counts():
    assert count_in_window(BOX_RP, SpectralWindow(0.5, 4.5)) == 2
    assert count_in_window(BOX_RP, SpectralWindow(-2.0, -1.0)) == 0


def test_box_eigenvalues():
    el = eigenvalues_in_window(BOX_RP, SpectralWindow(0.5, 4.5), 1e-10)
    assert el.values == pytest.approx([1.0, 4.0], abs=1e-9)
    assert list(el.indices) == [0, 1]
    assert len(eigenvalues_in_window(BOX_RP, SpectralWindow(5.5, 5.6))) == 0


def test_harmonic_two_sided_on_fixed_interval():
    rp = build_regular_problem(catalog("harmonic"), TwoSidedWeyl(3.25, 3.25), SpectralWindow(0.0, 6.5), -8.0, 8.0)
    el = eigenvalues_in_window(rp, SpectralWindow(0.0, 6.5))
    assert el.values == pytest.approx([1.0, 3.0, 5.0], abs=1e-6)


def test_box_eigenfunction_overlap():
    ef = eigenfunction(BOX_RP, 1.0)
    xs = np.linspace(0.0, math.pi, 401)
    ref = SampledFunction(xs, np.column_stack([np.sqrt(2 / math.pi) * np.sin(xs),
                                               np.sqrt(2 / math.pi) * np.cos(xs)]),
                          np.column_stack([np.sqrt(2 / math.pi) * np.cos(xs),
                                           -np.sqrt(2 / math.pi) * np.sin(xs)]))
    assert abs(weighted_inner(BOX, ef.function, ref)) >= 1 - 1e-8


def test_not_an_eigenvalue():
    with pytest.raises(NotAnEigenvalue):
        eigenfunction(BOX_RP, 2.5)


CASES = {
    "harmonic": (TwoSidedWeyl(), (0.0, 10.0), -6.0, 6.0),
    "coulomb_l1": (OneSidedLP(), (-0.07, -0.012), 0.02, 150.0),
    "mathieu_impurity": (TwoSidedWeyl(), (0.1, 1.6), -12.0, 12.0),
    "dirac_well": (TwoSidedWeyl(), (-0.9, 0.9), -12.0, 12.0),
    "dirichlet_box": (TwoSidedWeyl(), (0.5, 30.0), 0.0, math.pi),
}


@pytest.fixture(scope="module", params=sorted(CASES))
def case(request):
    scheme, window, a_n, b_n = CASES[request.param]
    w = SpectralWindow(*window)
    return request.param, build_regular_problem(catalog(request.param), scheme, w, a_n, b_n), w


def test_orthonormality_and_list_consistency(case):
    name, rp, w = case
    el = eigenvalues_in_window(rp, w)
    assert len(el) == count_in_window(rp, w) >= 1
    assert np.all(np.diff(el.values) > 0)
    assert np.all((el.values > w.lambda0) & (el.values < w.lambda1))
    efs = [eigenfunction(rp, lam) for lam in el]
    for i, f in enumerate(efs):
        assert weighted_inner(rp.spec, f.function, f.function) == pytest.approx(1.0, abs=1e-9)
        for g in efs[i + 1:]:
            assert abs(weighted_inner(rp.spec, f.function, g.function)) < 1e-7


def test_counting_monotone_in_lambda(case):
    name, rp, w = case
    if rp.spec.is_dirac:
        pytest.skip("absolute counts do not exist for Dirac operators")
    rng = np.random.default_rng(11)
    pad = w.lambda1 - w.lambda0
    for _ in range(100):
        l1, l2 = np.sort(rng.uniform(w.lambda0 - pad, w.lambda1 + pad, 2))
        assert prufer_count(rp, l1) <= prufer_count(rp, l2)


def test_dirac_mismatch_monotone():
    w = SpectralWindow(-0.9, 0.9)
    rp = build_regular_problem(catalog("dirac_well"), TwoSidedWeyl(), w, -12.0, 12.0)
    rng = np.random.default_rng(12)
    for _ in range(100):
        l1, l2 = np.sort(rng.uniform(-3.0, 3.0, 2))
        assert mismatch(rp, l1) <= mismatch(rp, l2) + 1e-8


def test_bc_continuity(case):
    name, rp, w = case
    base = eigenvalues_in_window(rp, w).values
    for da in (1e-8, -1e-8):
        moved = eigenvalues_in_window(rp.with_angles(alpha_n=rp.alpha_n + da), w).values
        assert moved.size == base.size
        assert np.max(np.abs(moved - base)) <= 1e-5


def random_problem(seed):
    rng = np.random.default_rng(seed)
    c = [float(v) for v in rng.normal(scale=5.0, size=3)]
    q = f"{c[0]!r}*sin({1 + seed % 4}*pi*x) + {c[1]!r}*x^2 + {c[2]!r}*exp(-x)"
    return make_problem("sl", (0.0, 1.0), {"p": "1", "q": q, "r": "1"}, 0.0, 0.0)


@pytest.mark.parametrize("seed", range(4))
def test_random_q_counts_match_oracle(seed):
    spec = random_problem(seed)
    rp = RegularProblem(spec, 0.0, 1.0, 0.0, 0.0)
    ref = dense_fd_oracle(spec, (0.0, 1.0), 2000, (-100.0, 1500.0)).values
    rng = np.random.default_rng(100 + seed)
    done = 0
    while done < 5:
        lo = rng.uniform(-50.0, 1200.0)
        hi = lo + rng.uniform(5.0, 300.0)
        if np.min(np.abs(ref - lo)) < 1e-3 or np.min(np.abs(ref - hi)) < 1e-3:
            continue
        w = SpectralWindow(lo, hi)
        assert count_in_window(rp, w) == fd_eigenvalues(spec, (0.0, 1.0), 2000, (lo, hi)).size
        done += 1


@pytest.mark.parametrize("seed", range(2))
def test_random_q_eigenvalues_match_extrapolated_oracle(seed):
    spec = random_problem(seed)
    rp = RegularProblem(spec, 0.0, 1.0, 0.0, 0.0)
    window = (-100.0, 800.0)
    ref = dense_fd_oracle(spec, (0.0, 1.0), 2000, window).values
    got = eigenvalues_in_window(rp, SpectralWindow(*window)).values
    assert got.size == ref.size
    assert np.all(np.abs(got - ref) <= 1e-6 * np.maximum(1.0, np.abs(ref)))
