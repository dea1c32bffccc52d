"""Discrete autocorrelations ``C_w(a) = sum_{n - m = a} w(n) conj(w(m))`` of
integer-sampled weights, their exponential sums, and the Fejer kernel."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import fftconvolve

from .weights import Weight, sample_integer_offsets

DIRECT_MAX = 2 ** 12
POSITIVITY_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class IntWeight:
    """Values ``w(n)`` for the integers ``a <= n <= a + len(values) - 1``."""

    a: int
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=complex).ravel()
        if v.size == 0:
            raise ValueError("empty integer weight")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite weight value")
        object.__setattr__(self, "a", int(self.a))
        object.__setattr__(self, "values", v)

    @property
    def b(self) -> int:
        return self.a + self.values.size - 1

    @property
    def support(self) -> tuple[int, int]:
        return self.a, self.b

    @property
    def n(self) -> np.ndarray:
        return np.arange(self.a, self.b + 1)

    @classmethod
    def from_weight(cls, w: Weight) -> "IntWeight":
        """Samples ``w(n)`` at every integer of the support."""
        k0, vals = sample_integer_offsets(w)
        return cls(k0, vals)

    @classmethod
    def unit_step(cls, H: int) -> "IntWeight":
        """``u_H = 1_{[1, H]}``."""
        return cls(1, np.ones(int(H)))

    @classmethod
    def point_mass(cls, n: int = 0, value: complex = 1.0) -> "IntWeight":
        return cls(n, [value])


@dataclass(frozen=True, eq=False)
class CorrelationTable:
    lags: np.ndarray
    values: np.ndarray

    def at(self, h: int) -> complex:
        i = int(h) - int(self.lags[0])
        return complex(self.values[i]) if 0 <= i < self.values.size else 0.0j

    def as_int_weight(self) -> IntWeight:
        return IntWeight(int(self.lags[0]), self.values)


def _correlate_direct(v: np.ndarray) -> np.ndarray:
    # c[a] = sum_m v[m + a] conj(v[m]) for a = -(L-1)..L-1
    return np.correlate(v, v, mode="full")


def _correlate_fast(v: np.ndarray) -> np.ndarray:
    return fftconvolve(v, np.conj(v[::-1]), mode="full")


def autocorrelation(w: IntWeight, method: str = "auto") -> CorrelationTable:
    """Exact table for supports up to ``2^12`` points, zero-padded FFT beyond."""
    v = w.values
    if method == "auto":
        method = "direct" if v.size <= DIRECT_MAX else "fft"
    if method == "direct":
        c = _correlate_direct(v)
    elif method == "fft":
        c = _correlate_fast(v)
        # restore exact Hermitian symmetry and the real lag-0 value
        c = 0.5 * (c + np.conj(c[::-1]))
    else:
        raise ValueError(f"unknown method {method!r}")
    L = v.size
    return CorrelationTable(np.arange(-(L - 1), L), c)


def dft(w: IntWeight, alpha):
    """``sum_n w(n) e(n alpha)``."""
    al = np.asarray(alpha, dtype=float)
    out = np.exp(2j * np.pi * np.multiply.outer(al, w.n)) @ w.values
    return out if out.ndim else complex(out)


def dft_on_grid(w: IntWeight, M: int) -> np.ndarray:
    """``dft(w, k / M)`` for ``k = 0..M-1`` by FFT (needs ``M >= len(w)``)."""
    if M < w.values.size:
        raise ValueError("grid smaller than the weight support")
    k = np.arange(M)
    return np.fft.ifft(w.values, n=M) * M * np.exp(2j * np.pi * w.a * k / M)


def fejer_kernel(H: int, alpha):
    """``|sum_{1 <= n <= H} e(n alpha)|^2 = sin^2(pi H alpha) / sin^2(pi alpha)``,
    ``H^2`` at integers."""
    al = np.asarray(alpha, dtype=float)
    s = np.sin(np.pi * al)
    near = np.isclose(al, np.round(al), rtol=0.0, atol=1e-15)
    safe = np.where(near, 1.0, s)
    out = np.where(near, float(H) ** 2, (np.sin(np.pi * H * al) / safe) ** 2)
    return out if out.ndim else float(out)


def correlation_dft(tab: CorrelationTable, alpha):
    """``sum_h C(h) e(h alpha)``, which equals ``|dft(w, alpha)|^2``."""
    return dft(tab.as_int_weight(), alpha)


def positivity_check(w: IntWeight, grid) -> bool:
    tab = autocorrelation(w)
    c0 = float(np.real(tab.at(0)))
    vals = np.atleast_1d(correlation_dft(tab, np.asarray(grid, dtype=float)))
    tol = POSITIVITY_RTOL * c0
    return bool(np.all(vals.real >= -tol) and np.all(np.abs(vals.imag) <= tol))


def parseval_grid(width: int) -> np.ndarray:
    """Uniform periodic grid on ``[-1/2, 1/2)`` with ``2^k > 4 width`` points;
    it integrates trigonometric polynomials of degree ``< 2^k`` exactly."""
    k = max(int(np.ceil(np.log2(4 * max(width, 1) + 1))), 4)
    M = 2 ** k
    return -0.5 + np.arange(M) / M


def trig_mean(values: np.ndarray) -> float:
    """``int_{-1/2}^{1/2}`` of a sampled 1-periodic function: the periodic
    trapezoid rule, i.e. the plain mean over the grid."""
    return float(np.mean(values))


def parseval_check(w: IntWeight) -> tuple[float, float]:
    """``(int |dft(w, alpha)|^2 d alpha, sum |w(n)|^2)``."""
    grid = parseval_grid(w.values.size)
    lhs = trig_mean(np.abs(dft(w, grid)) ** 2)
    return lhs, float(np.sum(np.abs(w.values) ** 2))


def correlation_form(f: np.ndarray, tab: CorrelationTable) -> complex:
    """``sum_{n, m} f(n) conj(f(m)) C(n - m)`` for ``f`` on consecutive integers."""
    f = np.asarray(f)
    L = f.size
    # g[a] = sum_m f(m + a) conj(f(m))
    g = np.correlate(f, f, mode="full") if L <= DIRECT_MAX else fftconvolve(f, np.conj(f[::-1]))
    lags = np.arange(-(L - 1), L)
    lo = max(-(L - 1), int(tab.lags[0]))
    hi = min(L - 1, int(tab.lags[-1]))
    if lo > hi:
        return 0.0j
    gs = g[lo + L - 1: hi + L]
    cs = tab.values[lo - int(tab.lags[0]): hi - int(tab.lags[0]) + 1]
    return complex(np.sum(gs * cs))
