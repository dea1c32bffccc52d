"""Finite exponential sums ``S(t) = sum_nu s(nu) e(nu t)`` and both sides of the
weighted Gallagher inequality

    m_{delta,T} ||S||^2_{2,T}  <=  int |sum_nu s(nu) w(x - nu)|^2 dx

evaluated exactly as Hermitian quadratic forms in the coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ParameterDomainError
from .transforms import min_sq_on_interval
from .weights import PiecewisePolynomial, Weight, cesaro, convolve, unit_step

HOLDS_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class ExpSumSpec:
    frequencies: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self):
        nu = np.array(self.frequencies, dtype=float).ravel()
        s = np.array(self.coefficients, dtype=complex).ravel()
        if nu.size < 1:
            raise ValueError("an exponential sum needs at least one frequency")
        if nu.shape != s.shape:
            raise ValueError("frequencies and coefficients differ in length")
        if not np.all(np.diff(nu) > 0):
            raise ValueError("frequencies must be strictly increasing")
        if not (np.all(np.isfinite(nu)) and np.all(np.isfinite(s))):
            raise ValueError("non-finite frequency or coefficient")
        object.__setattr__(self, "frequencies", nu)
        object.__setattr__(self, "coefficients", s)

    def __len__(self):
        return self.frequencies.size

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        ph = np.exp(2j * np.pi * np.multiply.outer(t, self.frequencies))
        return ph @ self.coefficients

    def scaled(self, c: complex) -> "ExpSumSpec":
        return ExpSumSpec(self.frequencies, self.coefficients * c)

    def majorant(self) -> "ExpSumSpec":
        return ExpSumSpec(self.frequencies, np.abs(self.coefficients))


@dataclass(frozen=True)
class InequalityReport:
    lhs: float
    rhs: float
    m: float
    holds: bool
    slack: float
    trivial: bool = False
    constant: float | None = None
    label: str = ""

    def row(self) -> dict:
        return {"lhs": self.lhs, "m": self.m, "rhs": self.rhs,
                "slack": self.slack, "holds": self.holds}


def _report(lhs, rhs, m, **kw) -> InequalityReport:
    slack = rhs - lhs
    holds = slack >= -HOLDS_RTOL * max(1.0, abs(rhs))
    return InequalityReport(float(lhs), float(rhs), float(m), bool(holds), float(slack), **kw)


def _hermitian_form(s: np.ndarray, kernel: np.ndarray) -> float:
    # sum_{i,j} s_i conj(s_j) K[i, j]
    return float(np.real(s @ kernel @ np.conj(s)))


def norm_sq_2T(spec: ExpSumSpec, T: float) -> float:
    """``int_{-T}^{T} |S(t)|^2 dt`` with kernel ``int e(ut) dt = sin(2 pi T u) / (pi u)``."""
    if not T > 0:
        raise ParameterDomainError("T must be positive")
    d = np.subtract.outer(spec.frequencies, spec.frequencies)
    return max(_hermitian_form(spec.coefficients, 2.0 * T * np.sinc(2.0 * T * d)), 0.0)


@lru_cache(maxsize=64)
def _autoconvolution(spline: PiecewisePolynomial) -> PiecewisePolynomial:
    # (w * w_reflected)(z) = int w(t) w(t - z) dt
    return convolve(spline, spline.reflect())


def smoothed_mean_square(spec: ExpSumSpec, w: Weight) -> float:
    """``int |sum_nu s(nu) w(x - nu)|^2 dx`` as the quadratic form with kernel
    ``(w * w_reflected)(nu_2 - nu_1)``."""
    kern = _autoconvolution(w.spline)
    d = np.subtract.outer(spec.frequencies, spec.frequencies)  # nu_i - nu_j
    return max(_hermitian_form(spec.coefficients, kern(-d)), 0.0)


def verify_lemma(spec: ExpSumSpec, w: Weight, T: float) -> InequalityReport:
    """Both sides of ``m ||S||^2_{2,T} <= int |sum s(nu) w(x - nu)|^2 dx``.

    When ``m = 0`` the inequality is trivial and the report says so.
    """
    m = min_sq_on_interval(w, T).m
    rhs = smoothed_mean_square(spec, w)
    lhs = m * norm_sq_2T(spec, T)
    return _report(lhs, rhs, m, trivial=(m == 0.0), label=f"lemma {w.label()} T={T:g}")


def window_integral(spec: ExpSumSpec, delta: float) -> float:
    """``int |sum_{x < nu <= x + delta} s(nu)|^2 dx``, exactly.

    The window sum is constant between consecutive points of
    ``{nu} U {nu - delta}``.
    """
    if not delta > 0:
        raise ParameterDomainError("delta must be positive")
    nu = spec.frequencies
    pts = np.unique(np.concatenate([nu, nu - delta]))
    mids = 0.5 * (pts[:-1] + pts[1:])
    prefix = np.concatenate([[0.0], np.cumsum(spec.coefficients)])
    hi = np.searchsorted(nu, mids + delta, side="right")
    lo = np.searchsorted(nu, mids, side="right")
    sums = prefix[hi] - prefix[lo]
    return float(np.sum(np.abs(sums) ** 2 * np.diff(pts)))


def _check_theta(theta):
    if not 0.0 < theta < 1.0:
        raise ParameterDomainError(f"theta must lie in (0, 1), got {theta}")


def gallagher_original(spec: ExpSumSpec, delta: float, theta: float) -> InequalityReport:
    """``||S||^2_{2,T} <= C(theta) int |sum_{x<nu<=x+delta} s(nu)|^2 dx`` with
    ``T = theta / delta`` and ``C(theta) = pi^2 theta^2 / (delta^2 sin^2(pi theta))``.

    The constant is ``1 / (delta^2 m)`` for the weight ``u_delta / delta``,
    whose squared transform is ``sin^2(pi delta t) / (pi delta t)^2``.
    """
    _check_theta(theta)
    if not delta > 0:
        raise ParameterDomainError("delta must be positive")
    T = theta / delta
    const = (math.pi * theta) ** 2 / (delta ** 2 * math.sin(math.pi * theta) ** 2)
    m = (math.sin(math.pi * theta) / (math.pi * theta)) ** 2
    lhs = norm_sq_2T(spec, T)
    rhs = const * window_integral(spec, delta)
    return _report(lhs, rhs, m, constant=const, label=f"original delta={delta:g} theta={theta:g}")


def gallagher_original_via_step(spec: ExpSumSpec, delta: float) -> float:
    """The same window integral through the step-weight quadratic form."""
    return smoothed_mean_square(spec, unit_step(delta))


def cesaro_constant(T: float, theta: float) -> float:
    return math.pi ** 4 * theta ** 2 * T ** 2 / math.sin(math.pi * theta) ** 4


def cesaro_instance(spec: ExpSumSpec, T: float, theta: float) -> InequalityReport:
    """The Cesaro specialisation with ``delta = theta / T``::

        ||S||^2_{2,T} <= pi^4 theta^2 T^2 / sin^4(pi theta)
                         * int |sum_{|nu-x|<=theta/T} (1 - T|nu-x|/theta) s(nu)|^2 dx
    """
    _check_theta(theta)
    if not T > 0:
        raise ParameterDomainError("T must be positive")
    w = cesaro(1, theta / T)
    const = cesaro_constant(T, theta)
    m = min_sq_on_interval(w, T).m
    if abs(const * m - 1.0) > 1e-10:
        raise AssertionError(f"Cesaro constant {const} disagrees with 1/m = {1.0 / m}")
    lhs = norm_sq_2T(spec, T)
    rhs = const * smoothed_mean_square(spec, w)
    return _report(lhs, rhs, m, constant=const, label=f"cesaro T={T:g} theta={theta:g}")


def random_spec(rng: np.random.Generator, n: int, nu_max: float = 100.0) -> ExpSumSpec:
    """Harness spec: ``nu`` uniform on ``[0, nu_max]`` (sorted), ``|s| <= 1``."""
    nu = np.sort(rng.uniform(0.0, nu_max, n))
    while np.any(np.diff(nu) <= 0):
        nu = np.sort(rng.uniform(0.0, nu_max, n))
    r = np.sqrt(rng.uniform(0.0, 1.0, n))
    s = r * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, n))
    return ExpSumSpec(nu, s)
