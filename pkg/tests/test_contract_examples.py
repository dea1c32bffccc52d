"""Worked examples with hand-derived values, one per documented behaviour."""

import math

import numpy as np
import pytest

from gallagher_lab.arith import ArithFnTable, ZERO_POLY, balanced_part, divisor_table, log_polynomial_dk
from gallagher_lab.compare import (cesaro_ratio, cesaro_ratio_transform, g_theta, gain_bound,
                                   is_T_better, lanczos_comparison, pointwise_gain, ScanSpec,
                                   violation_sweep)
from gallagher_lab.correlation import IntWeight, autocorrelation, dft, fejer_kernel, positivity_check
from gallagher_lab.dirichlet import CriticalLineSpec, DirichletPoly, corollary_check, d_norm_sq_2T, theorem1_rhs
from gallagher_lab.expsum import (ExpSumSpec, gallagher_original, norm_sq_2T, smoothed_mean_square,
                                  verify_lemma, window_integral)
from gallagher_lab.selberg import (box_selberg_integral, dft_identity_check, length_inertia_check,
                                   modified_selberg_integral, proposition1_check, selberg_integral,
                                   weighted_selberg_integral)
from gallagher_lab.transforms import generic_transform, min_sq_on_interval, transform
from gallagher_lab.weights import (PiecewisePolynomial, cesaro, convolve, eval_weight, lanczos,
                                   normalized_self_convolution, unit_interval, unit_step, zero_spline)

SMALL = ScanSpec(n=2 ** 12)


# --- weights ------------------------------------------------------------------

def test_weight_point_values():
    assert eval_weight(cesaro(1, 2.0), 1.0) == 0.5
    assert eval_weight(cesaro(1, 1.0), 0.25) == 0.75
    assert eval_weight(cesaro(1, 0.3), 0.0) == 1.0 and eval_weight(cesaro(1, 0.3), 0.3) == 0.0
    assert eval_weight(lanczos(2.0, 0.5), 1.0) == 1.0
    assert eval_weight(unit_interval(1.0), 1.5) == 0.0
    assert cesaro(0, 0.7).spline.allclose(unit_interval(0.7).spline)


@pytest.mark.parametrize("w", [unit_interval(0.6), cesaro(1, 0.6), cesaro(2, 0.6), cesaro(4, 0.6),
                               lanczos(0.6, 0.2)], ids=lambda w: w.label())
def test_builtins_even_nonnegative_bounded(w):
    x = np.random.default_rng(1).uniform(-1.0, 1.0, 10 ** 4)
    v = eval_weight(w, x)
    assert np.array_equal(v, eval_weight(w, -x))
    assert np.all(v >= -1e-15) and np.all(v <= 1.0 + 1e-15)


def test_zero_spline_convolution():
    assert convolve(cesaro(2, 1.0).spline, zero_spline()).is_zero()


def test_self_convolution_examples():
    d = 0.8
    w = normalized_self_convolution(unit_interval(d / 2))
    assert w.spline.allclose(cesaro(1, d).spline)
    assert w.delta == pytest.approx(2 * (d / 2))
    assert cesaro(2, d).spline.integral() == pytest.approx(d / 4, rel=1e-14)
    assert complex(transform(cesaro(3, d), 0.0)).real == pytest.approx(d / 64, rel=1e-14)


# --- transforms ----------------------------------------------------------------

def test_transform_formulas():
    d, y = 0.7, 0.45
    assert transform(cesaro(1, d), 0.0) == pytest.approx(d)
    assert transform(unit_interval(d), 0.0) == pytest.approx(2 * d)
    ref = math.sin(math.pi * d * y) ** 2 / (math.pi ** 2 * d * y ** 2)
    assert transform(cesaro(1, d), y) == pytest.approx(ref, rel=1e-13)
    ys = np.geomspace(1e-6, 50.0, 60)
    assert np.allclose(generic_transform(cesaro(1, d).spline, ys), transform(cesaro(1, d), ys),
                       rtol=1e-10, atol=1e-15 * d)
    assert complex(generic_transform(cesaro(3, d).spline, 0.0)).real == pytest.approx(
        cesaro(3, d).spline.integral(), rel=1e-13)


@pytest.mark.parametrize("dT", [0.1, 0.25, 0.4])
def test_minimum_formulas(dT):
    T = 3.0
    d = dT / T
    m1 = math.sin(2 * math.pi * d * T) ** 2 / (math.pi * T) ** 2
    mc = math.sin(math.pi * d * T) ** 4 / (math.pi ** 4 * T ** 4 * d ** 2)
    assert min_sq_on_interval(unit_interval(d), T).m == pytest.approx(m1, rel=1e-12)
    assert min_sq_on_interval(cesaro(1, d), T).m == pytest.approx(mc, rel=1e-12)


def test_minimum_small_T_is_mass_squared():
    w = lanczos(1.0, 0.4)
    assert min_sq_on_interval(w, 1e-5).m == pytest.approx(w.spline.integral() ** 2, rel=1e-8)


# --- expsum ----------------------------------------------------------------------

def test_expsum_examples():
    T, d = 1.7, 0.3
    assert norm_sq_2T(ExpSumSpec([0.0, d], [1.0, 1.0]), T) == pytest.approx(
        4 * T + 2 * math.sin(2 * math.pi * T * d) / (math.pi * d), rel=1e-13)
    zero = ExpSumSpec([0.0, 1.0, 2.5], [0, 0, 0])
    assert norm_sq_2T(zero, 2.0) == 0.0
    rep = verify_lemma(zero, cesaro(1, 0.1), 2.0)
    assert rep.lhs == rep.rhs == 0.0 and rep.holds
    one = ExpSumSpec([0.4], [1.0])
    assert smoothed_mean_square(one, unit_interval(0.25)) == pytest.approx(0.5)
    # frequencies far apart: sum |s|^2 ||w||^2
    s = ExpSumSpec([0.0, 10.0, 20.0], [1.0, 2j, -0.5])
    w = cesaro(2, 1.0)
    assert smoothed_mean_square(s, w) == pytest.approx(5.25 * convolve(w.spline, w.spline)(0.0), rel=1e-12)


def test_window_integral_hand_enumeration():
    assert window_integral(ExpSumSpec([0.0, 1.0], [1.0, 1.0]), 2.0) == pytest.approx(6.0)
    rep = gallagher_original(ExpSumSpec([0.0], [1.0]), 0.5, 0.25)
    assert rep.lhs == pytest.approx(2 * 0.5) and rep.holds and rep.slack > 0


# --- dirichlet ---------------------------------------------------------------------

def test_dirichlet_examples():
    assert d_norm_sq_2T(DirichletPoly(7, [1j]), 12.0) == pytest.approx(24.0)
    assert theorem1_rhs(DirichletPoly(3, np.zeros(4)), 50.0) == (0.0, 0.0)
    n = np.arange(10, 31)
    P = CriticalLineSpec(10, 30, np.ones(n.size), np.zeros(n.size))
    rep = corollary_check(P, 1e3, 0.1)
    assert rep.lhs == 0.0 and rep.main == 0.0


# --- arith -------------------------------------------------------------------------

def test_divisor_examples():
    assert divisor_table(2, 1, 20)[12] == 6
    assert divisor_table(3, 1, 20)[4] == 6
    assert np.all(divisor_table(1, 1, 50).values == 1)
    assert log_polynomial_dk(1).coefficients.tolist() == [1.0]
    assert log_polynomial_dk(3).coefficients[-1] == 0.5


def test_balanced_examples():
    d1 = divisor_table(1, 1, 100)
    assert np.all(balanced_part(d1).values == 0.0)
    N = 10 ** 5
    d2 = divisor_table(2, N + 1, 2 * N)
    mean_b = abs(float(np.mean(balanced_part(d2).values)))
    assert mean_b < 0.01 * float(np.mean(d2.values))


# --- selberg -------------------------------------------------------------------------

def _zero_table(hi):
    return ArithFnTable(1, hi, np.zeros(hi, dtype=np.int64), "0", ZERO_POLY)


def test_selberg_trivial_cases():
    z = _zero_table(300)
    assert selberg_integral(z, 100, 7).value == 0.0
    assert modified_selberg_integral(z, 100, 7).value == 0.0
    assert selberg_integral(divisor_table(1, 1, 300), 100, 7).value == 0.0


def test_box_and_cesaro_zero_agree():
    N, h = 400, 9
    b = balanced_part(divisor_table(2, 1, 2 * N + 3 * h))
    box = box_selberg_integral(b, N, h).value
    assert modified_selberg_integral(b, N, h, j=0).value == pytest.approx(box, rel=1e-12)
    assert weighted_selberg_integral(b, unit_interval(float(h)), N).value == pytest.approx(box, rel=1e-12)
    assert weighted_selberg_integral(b, cesaro(1, float(h)), N).value == pytest.approx(
        modified_selberg_integral(b, N, h).value, rel=1e-12)


def test_dft_identity_point_mass():
    N = 500
    b = balanced_part(divisor_table(2, 1, 2 * N + 4))
    rep = dft_identity_check(b, cesaro(1, 1.0), N, 1)
    seg = b.segment(N + 1, 2 * N)
    assert rep.J == pytest.approx(float(np.sum(seg ** 2)), rel=1e-13)
    assert rep.E == pytest.approx(0.0, abs=1e-9 * rep.J)


def test_proposition1_examples():
    N = 10 ** 4
    d1 = divisor_table(1, 1, 2 * N + 30)
    assert proposition1_check(d1, cesaro(1, 20.0), N).lhs == 0.0
    d2 = divisor_table(2, 1, 2 * N + 30)
    r = [proposition1_check(d2, cesaro(1, float(dl)), N).ratio for dl in (5, 10, 20)]
    assert all(0 < x < 2 for x in r)


def test_length_inertia_examples():
    N = 10 ** 5
    b = balanced_part(divisor_table(2, 1, 2 * N + 200))
    orig, _ = length_inertia_check(b, N, 10, 10)
    assert orig.terms["fraction"] == 0.0
    assert orig.terms["scaled"] == orig.lhs
    ratios = [length_inertia_check(b, N, 10, H)[1].ratio for H in (20, 40, 80)]
    assert all(0 < r < 1 for r in ratios)
    z = _zero_table(2 * N + 200)
    o, m = length_inertia_check(z, N, 10, 20)
    assert o.ratio == 0.0 and m.ratio == 0.0


# --- correlation ------------------------------------------------------------------------

def test_correlation_examples():
    d = 6
    tab = autocorrelation(IntWeight.from_weight(unit_step(float(d))))
    for t in range(0, d + 1):
        assert tab.at(t).real / d == pytest.approx(eval_weight(cesaro(1, float(d)), float(t)))
    w = IntWeight(-2, [0.5, 1.0, -2.0])
    assert autocorrelation(w).at(0) == pytest.approx(5.25)
    pm = autocorrelation(IntWeight.point_mass(4, 3.0))
    assert pm.lags.tolist() == [0] and pm.at(0) == 9.0
    assert positivity_check(IntWeight.point_mass(0, 2.0), np.linspace(-0.5, 0.5, 11))
    assert dft(w, 0.0) == pytest.approx(-0.5)
    assert fejer_kernel(8, 1 / 8) == pytest.approx(0.0, abs=1e-25)


# --- compare ---------------------------------------------------------------------------

def test_reflexive_and_origin_threshold():
    d, T = 0.025, 10.0
    rep = is_T_better(unit_interval(d), cesaro(1, d), T, SMALL)
    a = math.pi * d * T
    assert rep.ratio_threshold == pytest.approx(4 * a ** 2 / math.tan(a) ** 2, rel=1e-10)
    assert rep.ratio[0] == pytest.approx(4.0) and rep.ratio_threshold <= 4.0


def test_gain_bound_examples():
    w = cesaro(2, 1.0)
    assert gain_bound(w, w, 1e-4) < 1e-6
    v, w, T = cesaro(1, 0.025), unit_interval(0.025), 10.0
    a = math.pi * 0.025 * T
    m = math.sin(2 * a) ** 2 / (math.pi * T) ** 2
    r = math.sin(a) ** 4 / (math.pi ** 4 * T ** 4 * 0.025 ** 2)
    assert gain_bound(w, v, T) == pytest.approx(((2 * 0.025) ** 2 / m - 1) * 0.025 ** 2 / r, rel=1e-10)
    y = np.linspace(-T, T, 801)
    assert np.all(pointwise_gain(w, v, T, y) <= gain_bound(w, v, T) * (1 + 1e-12))


def test_g_theta_examples():
    assert g_theta(0.3, 1e-9) == pytest.approx(0.25)
    assert g_theta(0.3, 1 / 0.3) < 1e-25
    assert g_theta(0.4, 1 / 0.4) < 1e-12
    assert g_theta(1e-6, 1.0) == pytest.approx(0.25, rel=1e-9)
    x = np.linspace(-3, 3, 41)
    assert np.array_equal(cesaro_ratio(0, 0.3, x), g_theta(0.3, x))
    y = np.linspace(0.05, 1.95, 30)  # stops short of the pole at y = 2
    assert np.allclose(cesaro_ratio_transform(1, 0.5, y), cesaro_ratio(1, 0.25, y), rtol=1e-10)


@pytest.mark.parametrize("j", [0, 1, 2])
def test_cesaro_ladder_violation_shrinks(j):
    T = 10.0
    target = 2.0 ** (j - 1)
    rows = violation_sweep(lambda d: cesaro(j + 1, d), lambda d: cesaro(j, d), T,
                           [target * f for f in (0.6, 0.8, 0.9, 0.98)], SMALL)
    fr = [r[1] for r in rows]
    assert all(a > b for a, b in zip(fr, fr[1:])), fr


def test_lanczos_examples():
    d = 0.045
    rep = lanczos_comparison(d, d, 10.0, SMALL)
    example1 = is_T_better(cesaro(1, d), unit_interval(d), 10.0, SMALL)
    assert rep.vs_unit.verdict == example1.verdict
    assert rep.vs_unit.violation_fraction == pytest.approx(example1.violation_fraction)
    D = 0.01
    q = abs(transform(unit_interval(d), 0.0)) ** 2 / abs(transform(lanczos(d, D), 0.0)) ** 2
    assert q == pytest.approx((2 * d) ** 2 / (2 * d - D) ** 2, rel=1e-13)
