"""Independent reference computations: brute force, enumeration and
quadrature.  Nothing here reuses the closed-form kernels being checked."""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from .dirichlet import DirichletPoly, cesaro_sum, main_support
from .expsum import ExpSumSpec
from .weights import Weight, eval_weight


def _gauss_panels(f, a: float, b: float, panels: int, order: int = 24) -> float:
    x, wq = leggauss(order)
    edges = np.linspace(a, b, panels + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        total += half * float(np.sum(wq * f(mid + half * x)))
    return total


def norm_sq_2T_quadrature(spec: ExpSumSpec, T: float) -> float:
    """``int_{-T}^{T} |S(t)|^2 dt`` by composite Gauss-Legendre, with panels
    shorter than the fastest oscillation period of ``|S|^2``."""
    nu = spec.frequencies
    span = max(float(nu[-1] - nu[0]), 1e-12)
    panels = max(int(math.ceil(2.0 * T * span * 2)), 8)
    return _gauss_panels(lambda t: np.abs(spec(t)) ** 2, -T, T, panels)


def dirichlet_norm_quadrature(D: DirichletPoly, T: float) -> float:
    span = math.log(D.n_max / D.n_min) / (2.0 * math.pi)
    panels = max(int(math.ceil(2.0 * T * max(span, 1e-12) * 2)), 8)
    return _gauss_panels(lambda t: np.abs(D(t)) ** 2, -T, T, panels)


def smoothed_mean_square_quadrature(spec: ExpSumSpec, w: Weight) -> float:
    """``int |sum_nu s(nu) w(x - nu)|^2 dx`` with Gauss-Legendre on every cell
    between shifted breakpoints, where the integrand is a polynomial."""
    bp = w.spline.breakpoints
    pts = np.unique(np.add.outer(spec.frequencies, bp).ravel())
    order = w.spline.degree + 2
    x, wq = leggauss(order)
    total = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        xs = mid + half * x
        vals = eval_weight(w, np.subtract.outer(xs, spec.frequencies)) @ spec.coefficients
        total += half * float(np.sum(wq * np.abs(vals) ** 2))
    return total


def window_integral_bruteforce(spec: ExpSumSpec, delta: float) -> float:
    """``int |sum_{x < nu <= x + delta} s(nu)|^2 dx`` by masking every cell."""
    nu, s = spec.frequencies, spec.coefficients
    pts = np.unique(np.concatenate([nu, nu - delta]))
    total = 0.0
    for lo, hi in zip(pts[:-1], pts[1:]):
        x = 0.5 * (lo + hi)
        mask = (nu > x) & (nu <= x + delta)
        total += abs(complex(np.sum(s[mask]))) ** 2 * (hi - lo)
    return total


def theorem1_main_quadrature(D: DirichletPoly, T: float) -> float:
    """``T^2 int |sum_n C_{y/T}(n - y) a_n|^2 dy / y`` with scipy's QUADPACK
    and the kinks passed as break points."""
    lo, hi = main_support(D, T)
    n = D.n.astype(float)
    kinks = np.unique(np.concatenate([n / (1 + 1 / T), n, n / (1 - 1 / T)]))
    kinks = kinks[(kinks > lo) & (kinks < hi)]
    total = 0.0
    edges = np.concatenate([[lo], kinks, [hi]])
    f = lambda y: abs(cesaro_sum(D, y, T)) ** 2 / y
    for a, b in zip(edges[:-1], edges[1:]):
        total += quad(f, a, b, epsabs=0.0, epsrel=1e-12)[0]
    return T * T * total


def divisor_enumeration(k: int, n_max: int) -> np.ndarray:
    """``d_k(n)`` for ``n <= n_max`` by enumerating ordered ``k``-tuples with
    product at most ``n_max``."""
    counts = np.zeros(n_max + 1, dtype=np.int64)

    def rec(prod: int, left: int):
        if left == 1:
            # last factor c runs over 1..n_max // prod
            counts[prod: n_max + 1: prod] += 1
            return
        for a in range(1, n_max // prod + 1):
            rec(prod * a, left - 1)

    rec(1, k)
    counts[0] = 0
    return counts
