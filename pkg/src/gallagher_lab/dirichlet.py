"""Dirichlet polynomials ``D(t) = sum a_n n^{it}``: exact mean squares on
``[-T, T]`` and the two sides of the Cesaro-weighted Gallagher bound

    ||D||^2_{2,T} << T^2 int_1^oo |sum_n C_{y/T}(n - y) a_n|^2 dy/y
                     + int_1^oo (sum_{y-Delta <= n <= y+Delta} |a_n|)^2 dy/y

with ``Delta(y, T) = y (e^{1/T} - 1)``.

Between consecutive kinks ``n / (1 +- 1/T)`` and ``n`` the inner Cesaro sum is
``alpha + beta z`` in ``z = 1/y``, so the main term integrates in closed form;
the remainder integrand is a step function.  Adaptive Simpson over the same
kinks is kept as an independent route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterDomainError
from .expsum import ExpSumSpec
from .quadrature import integrate_with_nodes


@dataclass(frozen=True, eq=False)
class DirichletPoly:
    n_min: int
    coefficients: np.ndarray

    def __post_init__(self):
        if int(self.n_min) != self.n_min or self.n_min < 1:
            raise ValueError("n_min must be a positive integer")
        a = np.array(self.coefficients, dtype=complex).ravel()
        if a.size < 1:
            raise ValueError("empty Dirichlet polynomial")
        object.__setattr__(self, "n_min", int(self.n_min))
        object.__setattr__(self, "coefficients", a)

    @property
    def n_max(self) -> int:
        return self.n_min + self.coefficients.size - 1

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.n_min, self.n_max + 1)

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(1j * np.multiply.outer(t, np.log(self.n))) @ self.coefficients

    def to_expsum(self) -> ExpSumSpec:
        """``nu = log(n) / (2 pi)``, ``s(nu) = a_n``."""
        return ExpSumSpec(np.log(self.n) / (2.0 * np.pi), self.coefficients)


@dataclass(frozen=True, eq=False)
class CriticalLineSpec:
    """``P(t) = sum_{N1 <= n <= N2} w(n) b(n) / n^{1/2 + it}``; ``window[i]`` and
    ``b[i]`` are the values at ``n = N1 + i``."""

    N1: int
    N2: int
    window: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        if not 1 <= self.N1 <= self.N2:
            raise ValueError("need 1 <= N1 <= N2")
        size = self.N2 - self.N1 + 1
        w = np.array(self.window, dtype=float).ravel()
        b = np.array(self.b, dtype=complex).ravel()
        if w.size != size or b.size != size:
            raise ValueError(f"window and b must have {size} entries")
        object.__setattr__(self, "window", w)
        object.__setattr__(self, "b", b)

    @property
    def w_max(self) -> float:
        return float(np.max(np.abs(self.window)))

    def as_dirichlet(self, sign: int = -1) -> DirichletPoly:
        """``a_n = w(n) b(n) n^{-1/2}``; ``P(t) = D(-t)``, which has the same norm."""
        n = np.arange(self.N1, self.N2 + 1)
        return DirichletPoly(self.N1, self.window * self.b / np.sqrt(n))


def d_norm_sq_2T(D: DirichletPoly, T: float) -> float:
    """``int_{-T}^{T} |D(t)|^2 dt`` with kernel ``2 sin(T log(n/m)) / log(n/m)``."""
    if not T > 0:
        raise ParameterDomainError("T must be positive")
    L = np.subtract.outer(np.log(D.n), np.log(D.n))
    kern = 2.0 * T * np.sinc(T * L / np.pi)
    a = D.coefficients
    return max(float(np.real(a @ kern @ np.conj(a))), 0.0)


def delta_window(y, T: float):
    """``Delta(y, T) = y (e^{1/T} - 1) = y/T + O(y/T^2)``."""
    return np.asarray(y) * math.expm1(1.0 / T)


def cesaro_sum(D: DirichletPoly, y: float, T: float) -> complex:
    """``sum_n C_{y/T}(n - y) a_n``."""
    n = D.n
    wts = np.maximum(1.0 - T * np.abs(n - y) / y, 0.0)
    return complex(wts @ D.coefficients)


def _phi(r: float) -> float:
    # 2 atanh(r) - 2r without cancellation
    if r < 0.1:
        r2, term, acc, q = r * r, r ** 3, 0.0, 3
        while True:
            add = 2.0 * term / q
            acc += add
            if add < 1e-18 * acc:
                return acc
            term *= r2
            q += 2
    return 2.0 * math.atanh(r) - 2.0 * r


def _main_kinks(D: DirichletPoly, T: float) -> np.ndarray:
    n = D.n[D.coefficients != 0].astype(float)
    return np.unique(np.concatenate([n / (1.0 + 1.0 / T), n, n / (1.0 - 1.0 / T)]))


def _main_integral_exact(D: DirichletPoly, T: float, lo: float, hi: float) -> float:
    """``int_lo^hi |sum_n C_{y/T}(n - y) a_n|^2 dy / y``."""
    kinks = _main_kinks(D, T)
    pts = np.unique(np.clip(kinks, lo, hi))
    n_all, a_all = D.n.astype(float), D.coefficients
    total = 0.0
    for y1, y2 in zip(pts[:-1], pts[1:]):
        z1, z2 = 1.0 / y1, 1.0 / y2
        z0, eps = 0.5 * (z1 + z2), 0.5 * (z1 - z2)
        y0 = 1.0 / z0
        i0 = max(int(math.floor(y0 * (1.0 - 1.0 / T))) - D.n_min, 0)
        i1 = min(int(math.ceil(y0 * (1.0 + 1.0 / T))) - D.n_min + 1, a_all.size)
        if i1 <= i0:
            continue
        n, a = n_all[i0:i1], a_all[i0:i1]
        act = np.abs(n - y0) < y0 / T
        if not np.any(act):
            continue
        n, a = n[act], a[act]
        s = np.sign(n - y0)
        alpha = complex(np.sum(a * (1.0 - T * np.abs(n - y0) / y0)))
        beta_z0 = complex(-T * np.sum(s * n * a)) * z0
        r = eps / z0
        total += (abs(alpha) ** 2 * 2.0 * math.atanh(r)
                  + (abs(beta_z0) ** 2 - 2.0 * (alpha * beta_z0.conjugate()).real) * _phi(r))
    return max(total, 0.0)


def _main_integral_simpson(D: DirichletPoly, T: float, lo: float, hi: float,
                           tol: float, panels: int = 1) -> float:
    nodes = [lo, hi] + [k for k in _main_kinks(D, T) if lo < k < hi]
    f = lambda y: abs(cesaro_sum(D, y, T)) ** 2 / y
    return integrate_with_nodes(f, nodes, tol=tol, panels=panels)


def _remainder_exact(D: DirichletPoly, T: float) -> float:
    tau = math.exp(1.0 / T)
    absval = np.abs(D.coefficients)
    if tau >= 2.0:
        return math.inf if np.any(absval) else 0.0
    n = D.n.astype(float)
    nz = absval > 0
    pts = np.unique(np.concatenate([n[nz] / tau, n[nz] / (2.0 - tau)]))
    if pts.size < 2:
        return 0.0
    mids = 0.5 * (pts[:-1] + pts[1:])
    prefix = np.concatenate([[0.0], np.cumsum(absval)])
    # n in [y (2 - tau), y tau]
    i_lo = np.clip(np.ceil(mids * (2.0 - tau)) - D.n_min, 0, absval.size).astype(int)
    i_hi = np.clip(np.floor(mids * tau) - D.n_min + 1, 0, absval.size).astype(int)
    c = prefix[np.maximum(i_hi, i_lo)] - prefix[i_lo]
    return float(np.sum(c ** 2 * np.log(pts[1:] / pts[:-1])))


def main_support(D: DirichletPoly, T: float) -> tuple[float, float]:
    """Interval outside which ``C_{y/T}(n - y)`` vanishes for every ``n``."""
    return D.n_min / (1.0 + 1.0 / T), D.n_max / (1.0 - 1.0 / T)


def theorem1_rhs(D: DirichletPoly, T: float, method: str = "exact",
                 tol: float = 1e-12, panels: int = 1) -> tuple[float, float]:
    """``(main, remainder)`` of the Cesaro-weighted bound for ``||D||^2_{2,T}``.

    ``main`` carries the ``T^2`` factor.  ``method="simpson"`` integrates the
    main term by adaptive Simpson over the kinks instead of in closed form.
    """
    if not T > 1:
        raise ParameterDomainError(f"T must exceed 1, got {T}")
    if not np.any(D.coefficients):
        return 0.0, 0.0
    lo, hi = main_support(D, T)
    if T > 2:
        assert lo >= D.n_min / 2 and hi <= 2 * D.n_max
    if method == "exact":
        main = _main_integral_exact(D, T, lo, hi)
    elif method == "simpson":
        scale = T * float(np.sum(np.abs(D.coefficients)) ** 2)
        main = _main_integral_simpson(D, T, lo, hi, tol * max(scale, 1e-300) / T, panels)
    else:
        raise ValueError(f"unknown method {method!r}")
    return T * T * main, _remainder_exact(D, T)


@dataclass(frozen=True)
class Theorem1Row:
    T: float
    lhs: float
    main: float
    remainder: float

    @property
    def ratio(self) -> float:
        den = self.main + self.remainder
        return self.lhs / den if den > 0 else (0.0 if self.lhs == 0 else math.inf)


def theorem1_sweep(D: DirichletPoly, Ts) -> list[Theorem1Row]:
    rows = []
    for T in Ts:
        main, rem = theorem1_rhs(D, T)
        rows.append(Theorem1Row(float(T), d_norm_sq_2T(D, T), main, rem))
    return rows


@dataclass(frozen=True)
class CorollaryReport:
    T: float
    eps: float
    lhs: float
    main: float
    bound: float

    @property
    def ratio(self) -> float:
        den = self.main + self.bound
        return self.lhs / den if den > 0 else math.inf


def corollary_main(P: CriticalLineSpec, T: float) -> float:
    """``T^2 int_{N1/2}^{3 N2/2} |sum_n C_{y/T}(n - y) w(n) b(n) n^{-1/2}|^2 dy/y``."""
    D = P.as_dirichlet()
    lo, hi = main_support(D, T)
    return T * T * _main_integral_exact(D, T, max(lo, P.N1 / 2.0), min(hi, 1.5 * P.N2))


def corollary_check(P: CriticalLineSpec, T: float, eps: float) -> CorollaryReport:
    if not T > 1:
        raise ParameterDomainError(f"T must exceed 1, got {T}")
    if not eps > 0:
        raise ParameterDomainError("eps must be positive")
    D = P.as_dirichlet()
    lhs = d_norm_sq_2T(D, T)
    if not np.any(D.coefficients):
        return CorollaryReport(float(T), float(eps), lhs, 0.0, P.N2 ** (1.0 + eps) / T ** 2)
    return CorollaryReport(float(T), float(eps), lhs, corollary_main(P, T),
                           P.N2 ** (1.0 + eps) / T ** 2)
