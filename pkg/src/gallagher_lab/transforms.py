"""Fourier transforms ``w^(y) = int w(t) e(-ty) dt`` of weights.

Built-in families have closed forms; any spline is transformed exactly by
expanding each piece in Legendre polynomials, whose transforms are spherical
Bessel functions::

    int_{-1}^{1} P_n(t) e^{-izt} dt = 2 (-i)^n j_n(z)

The convention throughout is ``sinc(x) = sin(pi x) / (pi x)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial import legendre as npleg
from numpy.polynomial import polynomial as nppoly
from scipy.optimize import brentq, minimize_scalar
from scipy.special import spherical_jn

from .errors import UnsupportedClosedFormError
from .weights import PiecewisePolynomial, Weight, taylor_shift

# below this value of |y| * support-radius the moment series is used
SMALL_Y = 1e-4
_N_MOMENTS = 9


@dataclass(frozen=True)
class TransformValue:
    y: float
    value: complex


@dataclass(frozen=True)
class IntervalMin:
    """``m = min_{|t| <= T} |w^(t)|^2`` and a point where it is attained."""

    T: float
    argmin: float
    m: float


def sinc(x):
    return np.sinc(x)


def closed_form(w: Weight, y):
    """Closed-form transform of a built-in weight (complex only for the step)."""
    y = np.asarray(y, dtype=float)
    p = w.params
    kind = w.transform_kind
    if kind == "unit_interval":
        d = p["delta"]
        out = 2.0 * d * np.sinc(2.0 * d * y)
    elif kind == "unit_step":
        d = p["delta"]
        out = d * np.exp(-1j * np.pi * d * y) * np.sinc(d * y)
    elif kind == "cesaro":
        d, j = p["delta"], int(p["j"])
        J = 2 ** j
        out = (4.0 * d / 2.0 ** J) * np.sinc(d * y / 2.0 ** (j - 1)) ** J
    elif kind == "lanczos":
        d, D = p["delta"], p["Delta"]
        out = (2.0 * d - D) * np.sinc(D * y) * np.sinc((2.0 * d - D) * y)
    else:
        raise UnsupportedClosedFormError(
            f"no closed-form transform for a {w.family} weight; use generic_transform")
    return out if out.ndim else out[()]


@lru_cache(maxsize=128)
def _legendre_pieces(spline: PiecewisePolynomial):
    """Per piece: centre, half-length and Legendre coefficients on [-1, 1]."""
    h = 0.5 * spline.lengths
    centres = spline.breakpoints[:-1] + h
    k = np.arange(spline.degree + 1)
    rows = []
    for c, hh in zip(spline.coeffs, h):
        # p(h (t + 1)) in powers of t
        rows.append(npleg.poly2leg(taylor_shift(c * hh ** k, 1.0)))
    width = max(len(r) for r in rows)
    leg = np.array([np.pad(r, (0, width - len(r))) for r in rows])
    return centres, h, leg


@lru_cache(maxsize=128)
def _moments(spline: PiecewisePolynomial, count: int = _N_MOMENTS) -> np.ndarray:
    """``int x^m p(x) dx`` for ``m < count``."""
    out = np.zeros(count)
    for a, L, c in zip(spline.breakpoints[:-1], spline.lengths, spline.coeffs):
        xpow = np.array([1.0])
        for m in range(count):
            prim = nppoly.polyint(nppoly.polymul(c, xpow))
            out[m] += nppoly.polyval(L, prim)
            xpow = nppoly.polymul(xpow, [a, 1.0])  # (a + u)^(m+1)
    return out


def generic_transform(p: PiecewisePolynomial, y):
    """Exact transform of a compactly supported spline (no quadrature)."""
    y_arr = np.asarray(y, dtype=float)
    flat = y_arr.ravel()
    out = np.zeros(flat.shape, dtype=complex)
    if p.is_zero():
        return out.reshape(y_arr.shape) if y_arr.ndim else complex(0.0)
    radius = max(abs(v) for v in p.support)
    small = np.abs(flat) * radius < SMALL_Y
    if np.any(small):
        mom = _moments(p)
        m = np.arange(mom.size)
        fact = np.array([math.factorial(int(k)) for k in m], dtype=float)
        z = (-2j * np.pi * flat[small])[:, None] ** m
        out[small] = z @ (mom / fact)
    big = ~small
    if np.any(big):
        centres, h, leg = _legendre_pieces(p)
        n = np.arange(leg.shape[1])
        phase = (-1j) ** n
        omega = 2.0 * np.pi * flat[big]
        for c, hh, ell in zip(centres, h, leg):
            nz = np.flatnonzero(ell)
            if nz.size == 0:
                continue
            nn = n[: nz[-1] + 1]
            jn = spherical_jn(nn[None, :], (omega * hh)[:, None])
            out[big] += hh * np.exp(-1j * omega * c) * (2.0 * jn @ (ell[nn] * phase[nn]))
    out = out.reshape(y_arr.shape)
    return out if out.ndim else complex(out[()])


def transform(w: Weight, y):
    """Closed form when the family has one, the generic transform otherwise."""
    if w.transform_kind == "generic":
        return generic_transform(w.spline, y)
    return closed_form(w, y)


def abs_sq(w: Weight, y):
    return np.abs(transform(w, y)) ** 2


def is_real_transform(w: Weight) -> bool:
    """True when ``w^`` is real-valued, i.e. ``w`` is even."""
    if w.transform_kind in ("unit_interval", "cesaro", "lanczos"):
        return True
    if w.transform_kind == "unit_step":
        return False
    s = w.spline
    return bool(np.isclose(s.support[0], -s.support[1])
                and s.allclose(s.reflect(), atol=1e-13 * max(1.0, np.max(np.abs(s.coeffs)))))


def monotone_radius(w: Weight) -> float:
    """Largest ``Y`` with ``|w^|`` nonincreasing on ``[0, Y]`` (0 if unknown)."""
    p = w.params
    kind = w.transform_kind
    if kind == "unit_interval":
        return 0.5 / p["delta"]
    if kind == "unit_step":
        return 1.0 / p["delta"]
    if kind == "cesaro":
        return 2.0 ** (int(p["j"]) - 1) / p["delta"]
    if kind == "lanczos":
        return 1.0 / max(p["Delta"], 2.0 * p["delta"] - p["Delta"])
    return 0.0


def min_sq_on_interval(w: Weight, T: float, n_grid: int = 4096) -> IntervalMin:
    """Global minimum of ``|w^(t)|^2`` on ``[-T, T]``.

    ``|w^|`` is even for real weights, so only ``[0, T]`` is searched: a grid
    (at least ``n_grid`` points, and 16 per unit of ``radius * t``) locates
    candidate minima, which are then polished by bounded Brent iterations.  A
    sign change of a real transform means the minimum is exactly 0.
    """
    if not T > 0:
        raise ValueError("T must be positive")
    if T <= monotone_radius(w):
        val = float(abs_sq(w, T))
        return IntervalMin(T, float(T), val)

    radius = max(w.delta, 1e-300)
    n = int(max(n_grid, math.ceil(16 * radius * T) + 1))
    t = np.linspace(0.0, T, n)
    real = is_real_transform(w)
    vals = transform(w, t)
    if real:
        vals = np.real(vals)
        sign = np.sign(vals)
        flips = np.flatnonzero(sign[:-1] * sign[1:] < 0)
        exact = np.flatnonzero(vals == 0.0)
        if exact.size:
            return IntervalMin(T, float(t[exact[0]]), 0.0)
        if flips.size:
            i = flips[0]
            f = lambda s: float(np.real(transform(w, s)))
            root = brentq(f, t[i], t[i + 1], xtol=1e-15 * max(1.0, T))
            return IntervalMin(T, float(root), 0.0)
    g = np.abs(vals) ** 2

    # local minima of the sampled curve, endpoints included
    cand = [0, n - 1] + [i for i in range(1, n - 1) if g[i] <= g[i - 1] and g[i] <= g[i + 1]]
    cand = sorted(set(cand), key=lambda i: g[i])[:8]
    best_t, best = float(t[cand[0]]), float(g[cand[0]])
    f2 = lambda s: float(abs_sq(w, s))
    for i in cand:
        if i in (0, n - 1):
            continue
        res = minimize_scalar(f2, bounds=(t[i - 1], t[i + 1]), method="bounded",
                              options={"xatol": 1e-13 * max(T, 1.0 / radius)})
        if res.fun < best:
            best_t, best = float(res.x), float(res.fun)
    return IntervalMin(T, best_t, max(best, 0.0))


def cesaro_band(j: int) -> tuple[float, float]:
    """Bounds on ``C^(j)^(y) / delta`` for ``|y| <= 2^(j-2) / delta``."""
    J = 2 ** j
    top = 4.0 / 2.0 ** J
    return top * (2.0 / math.pi) ** J, top


def transform_rows(w: Weight, ys) -> list[tuple[float, float, float]]:
    """``(y, |w^(y)|, |w^(y)|^2)`` rows for plotting."""
    vals = np.abs(np.atleast_1d(transform(w, np.asarray(ys, dtype=float))))
    return [(float(y), float(v), float(v * v)) for y, v in zip(np.atleast_1d(ys), vals)]
