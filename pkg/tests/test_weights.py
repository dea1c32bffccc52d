import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from gallagher_lab.errors import ParameterDomainError
from gallagher_lab.weights import (PiecewisePolynomial, cesaro, convolve, custom, eval_weight,
                                   lanczos, make_weight, parse_weight_spec,
                                   sample_integer_offsets, unit_interval, unit_step)


def _random_spline(draw_coeffs, lo, widths):
    bp = lo + np.concatenate([[0.0], np.cumsum(widths)])
    return PiecewisePolynomial(bp, np.asarray(draw_coeffs).reshape(len(widths), -1))


splines = st.builds(
    _random_spline,
    st.lists(st.floats(-2, 2), min_size=6, max_size=6),
    st.floats(-3, 3),
    st.lists(st.floats(0.1, 2.0), min_size=2, max_size=2),
)


def test_cesaro_cubic_at_origin():
    # the cubic spline C^(2)_1 takes the value 1/3 at 0
    assert eval_weight(cesaro(2, 1.0), 0.0) == pytest.approx(1.0 / 3.0, abs=1e-15)


def test_cesaro_one_is_triangle():
    d = 0.7
    x = np.linspace(-1.0, 1.0, 101)
    assert np.allclose(eval_weight(cesaro(1, d), x), np.maximum(1 - np.abs(x) / d, 0), atol=1e-14)


@pytest.mark.parametrize("j", range(5))
def test_cesaro_support_and_mass(j):
    w = cesaro(j, 1.3)
    assert w.delta == pytest.approx(1.3)
    ref = quad(lambda x: eval_weight(w, x), -1.3, 1.3, points=list(w.spline.breakpoints),
               limit=200)[0]
    assert w.spline.integral() == pytest.approx(ref, rel=1e-10)


def test_step_convention():
    w = unit_step(2.0)
    assert eval_weight(w, 0.0) == 0.0
    assert eval_weight(w, 1e-12) == 1.0
    assert eval_weight(w, 2.0) == 1.0
    assert eval_weight(w, 2.0 + 1e-12) == 0.0


def test_lanczos_shape():
    w = lanczos(1.0, 0.25)
    assert eval_weight(w, 0.7) == pytest.approx(1.0)
    assert eval_weight(w, 0.875) == pytest.approx(0.5)
    # Delta = delta degenerates to the triangle
    assert lanczos(1.0, 1.0).spline.allclose(cesaro(1, 1.0).spline)
    with pytest.raises(ParameterDomainError):
        lanczos(1.0, 1.5)


@settings(max_examples=40, deadline=None)
@given(splines, splines)
def test_convolution_mass_is_multiplicative(p, q):
    c = convolve(p, q)
    assert c.integral() == pytest.approx(p.integral() * q.integral(), rel=1e-9, abs=1e-9)


@settings(max_examples=15, deadline=None)
@given(splines, splines, st.floats(0.0, 1.0))
def test_convolution_matches_quadrature(p, q, s):
    c = convolve(p, q)
    lo, hi = c.support
    x = lo + s * (hi - lo)
    a, b = p.support
    pts = sorted(set(p.breakpoints) | set(x - q.breakpoints))
    pts = [t for t in pts if a < t < b]
    ref = quad(lambda t: p(t) * q(x - t), a, b, points=pts or None, limit=200)[0]
    assert float(c(x)) == pytest.approx(ref, abs=1e-8 * max(1.0, abs(ref)))


def test_convolution_box_box_is_triangle():
    box = unit_interval(0.5).spline
    tri = convolve(box, box)
    assert float(tri(0.0)) == pytest.approx(1.0)
    assert float(tri(0.5)) == pytest.approx(0.5)
    assert tri.support == (-1.0, 1.0)


def test_csv_roundtrip(tmp_path):
    s = cesaro(3, 2.0).spline
    back = PiecewisePolynomial.from_csv(s.to_csv())
    assert back.allclose(s, atol=0.0)
    f = tmp_path / "w.csv"
    f.write_text(s.to_csv())
    w = parse_weight_spec(f"custom:{f}")
    assert w.family == "custom"
    assert eval_weight(w, 0.3) == pytest.approx(eval_weight(cesaro(3, 2.0), 0.3), rel=1e-14)


def test_parse_specs():
    assert parse_weight_spec("unit:delta=1").label() == "unit:delta=1"
    assert parse_weight_spec("step:delta=2").family == "unit_step"
    assert parse_weight_spec("cesaro:j=2,delta=1.5").params == {"j": 2, "delta": 1.5}
    assert parse_weight_spec("lanczos:delta=2,Delta=0.5").family == "lanczos"
    for bad in ("unit", "unit:delta", "unit:delta=x", "unit:delta=-1", "cesaro:j=1.5,delta=1",
                "triangle:delta=1"):
        with pytest.raises(ParameterDomainError):
            parse_weight_spec(bad)


def test_make_weight_aliases():
    assert make_weight("unit", delta=1.0).family == "unit_interval"
    assert custom(cesaro(1, 1.0).spline).transform_kind == "generic"


def test_integer_samples():
    k0, vals = sample_integer_offsets(cesaro(1, 3.0))
    assert k0 == -3
    assert np.allclose(vals, [0, 1 / 3, 2 / 3, 1, 2 / 3, 1 / 3, 0])


def test_bad_splines():
    with pytest.raises(ValueError):
        PiecewisePolynomial([0.0], [[1.0]])
    with pytest.raises(ValueError):
        PiecewisePolynomial([1.0, 0.0], [[1.0]])
    with pytest.raises(ValueError):
        PiecewisePolynomial([0.0, 1.0], [[math.nan]])
