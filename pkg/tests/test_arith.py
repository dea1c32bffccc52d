import numpy as np
import pytest

from gallagher_lab.arith import (EULER_GAMMA, STIELTJES_1, ArithFnTable, LogPolynomial,
                                 ZERO_POLY, balanced_part, constant_table, divisor_bruteforce,
                                 divisor_table, divisor_values, fit_log_polynomial,
                                 log_polynomial_dk, table_from_csv)
from gallagher_lab.errors import ParameterDomainError, PreconditionError, RangeCoverageError
from gallagher_lab.oracles import divisor_enumeration


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_sieve_matches_enumeration(k):
    n = 600
    assert np.array_equal(divisor_values(k, n)[1:], divisor_enumeration(k, n)[1:])


def test_sieve_spot_values():
    d3 = divisor_values(3, 100)
    assert [divisor_bruteforce(3, m) for m in (1, 12, 64, 90)] == [d3[1], d3[12], d3[64], d3[90]]
    assert divisor_values(2, 12)[12] == 6
    assert divisor_values(3, 8)[8] == 10


def test_log_polynomials():
    assert np.allclose(log_polynomial_dk(2).coefficients, [2 * EULER_GAMMA, 1.0])
    p3 = log_polynomial_dk(3)
    assert p3.coefficients[0] == pytest.approx(3 * EULER_GAMMA ** 2 - 3 * STIELTJES_1)
    assert p3.degree == 2
    with pytest.raises(ParameterDomainError):
        log_polynomial_dk(4)


@pytest.mark.parametrize("k", [2, 3])
def test_fit_oracle_agrees(k):
    rep = fit_log_polynomial(k, 10 ** 4, 2 * 10 ** 5)
    assert rep.passed, rep


def test_log_polynomial_api():
    p = LogPolynomial([1.0, 2.0, 0.0])
    assert p.degree == 1 and not p.is_zero()
    assert p.at_log(np.array([np.e]))[0] == pytest.approx(3.0)
    assert ZERO_POLY.is_zero() and ZERO_POLY.degree == 0
    assert np.allclose(p.derivative().coefficients, [2.0])


def test_table_contract():
    t = divisor_table(2, 10, 20)
    assert t.is_integer and t[12] == 6 and not t.is_balanced
    with pytest.raises(RangeCoverageError):
        t[21]
    with pytest.raises(RangeCoverageError):
        t.require(9, 20)
    assert t.norm_inf(10, 20) == 6
    assert np.array_equal(t.segment(8, 11), [0, 0, 4, 2])
    with pytest.raises(ParameterDomainError):
        ArithFnTable(0, 3, [1, 2, 3, 4])


def test_balanced_part():
    t = divisor_table(2, 100, 200)
    b = balanced_part(t)
    n = np.arange(100, 201)
    assert b.is_balanced
    assert np.allclose(b.values, t.values - (np.log(n) + 2 * EULER_GAMMA), atol=1e-14)
    assert balanced_part(b) is b
    with pytest.raises(PreconditionError):
        balanced_part(ArithFnTable(1, 3, [1, 2, 3]))


def test_constant_table():
    c = constant_table(1, 1, 10)
    assert c.is_integer and c.log_poly.coefficients.tolist() == [1.0]
    assert balanced_part(c).values.tolist() == [0.0] * 10


def test_table_from_csv(tmp_path):
    f = tmp_path / "f.csv"
    f.write_text("n,f\nlogpoly,0\n5,1\n6,-1\n7,2\n")
    t = table_from_csv(str(f))
    assert (t.lo, t.hi) == (5, 7) and t.is_integer and t.is_balanced
    g = tmp_path / "g.csv"
    g.write_text("5,1\n7,2\n")
    with pytest.raises(ValueError):
        table_from_csv(str(g))
