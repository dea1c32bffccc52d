import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gallagher_lab.arith import balanced_part, constant_table, divisor_table
from gallagher_lab.errors import ParameterDomainError, PreconditionError, RangeCoverageError
from gallagher_lab.selberg import (bruteforce_selberg, cl_comparison, dft_identity_check,
                                   j3_probe, length_inertia_check, modified_selberg_integral,
                                   parseval_F, proposition1_check, selberg_integral, u_H,
                                   u_H_bound_ratio, weighted_selberg_integral)
from gallagher_lab.weights import cesaro, sample_integer_offsets, unit_step


def _tables(N, h):
    d2 = divisor_table(2, 1, 2 * N + 2 * h + 2)
    return {"d1": divisor_table(1, 1, 2 * N + 2 * h + 2), "d2": d2, "d2~": balanced_part(d2)}


def _tri(h):
    return {k: h - abs(k) for k in range(-(h - 1), h)}


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 300), st.integers(1, 25))
def test_original_equals_bruteforce(N, h):
    d2 = _tables(N, h)["d2"]
    # integer table, no mean: bit-equal
    assert selberg_integral(d2, N, h, subtract_mean=False).value == bruteforce_selberg(d2, N, h)
    ref = bruteforce_selberg(d2, N, h, p=d2.log_poly)
    assert selberg_integral(d2, N, h).value == pytest.approx(ref, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(30, 300), st.integers(1, 25))
def test_modified_equals_bruteforce(N, h):
    t = _tables(N, h)
    d2 = t["d2"]
    ref = bruteforce_selberg(d2, N, h, _tri(h), p=d2.log_poly, divisor=h)
    assert modified_selberg_integral(d2, N, h).value == pytest.approx(ref, rel=1e-12)
    b = t["d2~"]
    ref = bruteforce_selberg(b, N, h, _tri(h), divisor=h)
    assert modified_selberg_integral(b, N, h).value == pytest.approx(ref, rel=1e-12)


def test_d1_vanishes_exactly():
    t = _tables(2000, 50)["d1"]
    for h in (1, 7, 50):
        assert selberg_integral(t, 2000, h).value == 0.0
        assert modified_selberg_integral(t, 2000, h).value == 0.0


@pytest.mark.parametrize("j", [0, 2, 3])
def test_jth_equals_bruteforce(j):
    N, h = 200, 16
    b = _tables(N, 4 * h)["d2~"]
    k0, vals = sample_integer_offsets(cesaro(j, float(h)))
    wts = {k0 + i: v for i, v in enumerate(vals) if v != 0}
    ref = bruteforce_selberg(b, N, h, wts)
    assert modified_selberg_integral(b, N, h, j).value == pytest.approx(ref, rel=1e-12)
    with pytest.raises(PreconditionError):
        modified_selberg_integral(_tables(N, 4 * h)["d2"], N, h, j)


def test_weighted_equals_bruteforce_exact_on_integers():
    N = 500
    one = constant_table(1, 1, 2 * N + 10).with_log_poly(None)
    w = unit_step(6.0)
    k0, vals = sample_integer_offsets(w)
    wts = {k0 + i: int(v) for i, v in enumerate(vals) if v}
    ref = bruteforce_selberg(one, N, 6, wts)
    assert weighted_selberg_integral(one, w, N, require_balanced=False).value == ref == N * 36


def test_h_zero_and_guards():
    t = _tables(100, 10)["d2"]
    assert selberg_integral(t, 100, 0).value == 0.0
    with pytest.raises(ParameterDomainError):
        selberg_integral(t, 0, 3)
    with pytest.raises(RangeCoverageError):
        selberg_integral(divisor_table(2, 1, 150), 100, 5)
    with pytest.raises(PreconditionError):
        weighted_selberg_integral(t, cesaro(1, 4.0), 100)


@pytest.mark.parametrize("H", [8, 16, 32])
def test_dft_identity(H):
    N = 2000
    b = balanced_part(divisor_table(2, 1, 2 * N + 2 * H))
    rep = dft_identity_check(b, cesaro(1, float(H)), N, H)
    assert rep.identity_rel < 1e-9
    assert rep.normalized <= 1.0


def test_proposition1_balanced_has_no_tail():
    N = 1000
    d2 = divisor_table(2, 1, 2 * N + 40)
    rep = proposition1_check(d2, cesaro(1, 16.0), N)
    assert set(rep.terms) == {"balanced", "tail"}
    assert 0 < rep.ratio < math.inf
    repb = proposition1_check(balanced_part(d2), cesaro(1, 16.0), N)
    assert set(repb.terms) == {"balanced"} and repb.ratio == pytest.approx(1.0)


def test_length_inertia():
    N = 8000
    b = balanced_part(divisor_table(2, 1, 2 * N + 100))
    orig, mod = length_inertia_check(b, N, 20, 40)
    assert 0 < orig.ratio < 1 and 0 < mod.ratio < 1
    with pytest.raises(ParameterDomainError):
        length_inertia_check(b, N, 50, 40)
    with pytest.raises(ParameterDomainError):
        length_inertia_check(b, N, 10, 500)


def test_cl_comparison_finite():
    N = 3000
    b = balanced_part(divisor_table(2, 1, 2 * N + 60))
    assert 0 < cl_comparison(b, N, 30).ratio < math.inf


def test_u_H_bound():
    al = np.linspace(-0.5, 0.5, 2001)
    assert u_H_bound_ratio(12, al) <= 1.0 + 1e-12
    assert u_H(5, 0.0) == pytest.approx(5.0)


def test_parseval_F():
    N = 700
    lhs, rhs = parseval_F(divisor_table(2, 1, 2 * N), N)
    assert lhs == pytest.approx(rhs, rel=1e-12)


def test_j3_probe_is_finite():
    assert 0 < j3_probe(2000, 20) < 10
