"""Selberg-type integrals over ``x ~ N`` (integers ``N < x <= 2N``):

    J_f(N, h)      = sum_x |sum_{x<n<=x+h} f(n) - M_f(x, h)|^2
    J~_f(N, h)     = sum_x |sum_n C_h(n - x) f(n) - M_f(x, h)|^2
    J^(j)_f(N, H)  = sum_x |sum_n C^(j)_H(n - x) f(n)|^2
    J_{w,f}(N, H)  = sum_x |sum_n w_H(n - x) f(n)|^2

with ``M_f(x, h) = h p_f(log x)``, plus the ratio reports for the mean-value
reduction, the length-inertia inequalities and the exponential-sum bridge.
Every ``<<`` becomes a measured ratio ``lhs / rhs``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .arith import (ArithFnTable, LogPolynomial, balanced_part, divisor_table,  # noqa: F401
                    log_polynomial_dk)
from .correlation import (IntWeight, autocorrelation, correlation_form, dft, dft_on_grid,
                          parseval_grid, trig_mean)
from .errors import ParameterDomainError, PreconditionError
from .weights import Weight, cesaro, sample_integer_offsets

KINDS = ("original", "modified", "jth", "weighted", "box")


@dataclass(frozen=True)
class SelbergResult:
    kind: str
    N: int
    h: int
    value: float
    H: int | None = None
    j: int | None = None

    def __post_init__(self):
        assert self.value >= 0.0, "Selberg sums are nonnegative"


def _x_range(N: int) -> np.ndarray:
    return np.arange(N + 1, 2 * N + 1)


def _check_N(N: int, h: int) -> None:
    if N < 1:
        raise ParameterDomainError("N must be a positive integer")
    if h < 1:
        raise ParameterDomainError("window length must be at least 1")


def _sum_sq(r: np.ndarray) -> float:
    return math.fsum((np.abs(r) ** 2).tolist()) if r.size else 0.0


def _poly_or_raise(f: ArithFnTable, mean: LogPolynomial | None, subtract: bool) -> LogPolynomial | None:
    if not subtract:
        return None
    p = mean if mean is not None else f.log_poly
    if p is None:
        raise PreconditionError(
            f"table {f.name} has no logarithmic polynomial; pass one or disable the mean")
    return None if p.is_zero() else p


def _residual(sums: np.ndarray, x: np.ndarray, mass, p: LogPolynomial | None) -> np.ndarray:
    if p is None:
        return sums
    return sums - mass * p.at_log(x)


def window_sums(f: ArithFnTable, N: int, h: int) -> np.ndarray:
    """``sum_{x < n <= x + h} f(n)`` for ``x ~ N`` via prefix sums."""
    f.require(N + 1, 2 * N + h)
    seg = f.segment(N + 1, 2 * N + h)
    F = np.concatenate([[0], np.cumsum(seg)])
    # x = N + 1 + i sums seg[i + 1 .. i + h]
    return F[h + 1: h + 1 + N] - F[1: N + 1]


def selberg_integral(f: ArithFnTable, N: int, h: int, mean: LogPolynomial | None = None,
                     subtract_mean: bool = True) -> SelbergResult:
    """``J_f(N, h)``; ``h = 0`` gives 0 (empty window, zero mean)."""
    if h == 0:
        return SelbergResult("original", N, 0, 0.0)
    _check_N(N, h)
    p = _poly_or_raise(f, mean, subtract_mean)
    r = _residual(window_sums(f, N, h), _x_range(N), h, p)
    return SelbergResult("original", N, h, _sum_sq(r))


def box_selberg_integral(f: ArithFnTable, N: int, h: int) -> SelbergResult:
    """``sum_x |sum_{|n - x| <= h} f(n)|^2`` (no mean subtracted)."""
    _check_N(N, h)
    f.require(N + 1 - h, 2 * N + h)
    seg = f.segment(N - h, 2 * N + h)
    F = np.concatenate([[0], np.cumsum(seg)])
    # x = N+1+i covers seg indices [i, i + 2h] after the offset N - h
    i = np.arange(N)
    return SelbergResult("box", N, h, _sum_sq(F[i + 2 * h + 2] - F[i + 1]))


def cesaro_window_sums(f: ArithFnTable, N: int, h: int) -> np.ndarray:
    """``sum_n C_h(n - x) f(n)`` for ``x ~ N`` by double prefix sums.

    With ``S2(m) = sum_{n <= m} (m - n + 1) f(n)`` the triangle telescopes:
    ``h * sum_n C_h(n - x) f(n) = S2(x+h-1) - 2 S2(x-1) + S2(x-h-1)``.
    """
    A = N + 1 - h
    f.require(A + 1, 2 * N + h - 1)
    seg = f.segment(A, 2 * N + h)
    S2 = np.cumsum(np.concatenate([[0], np.cumsum(seg)]))  # S2[i] = S2(A - 1 + i)
    x = _x_range(N)
    idx = lambda m: m - A + 1
    num = S2[idx(x + h - 1)] - 2 * S2[idx(x - 1)] + S2[idx(x - h - 1)]
    return num / h


def _weighted_sums(f: ArithFnTable, k0: int, vals: np.ndarray, N: int) -> np.ndarray:
    L = vals.size
    f.require(N + 1 + k0, 2 * N + k0 + L - 1)
    seg = f.segment(N + 1 + k0, 2 * N + k0 + L - 1)
    if f.is_integer and np.all(vals == np.round(vals)):
        vals = vals.astype(np.int64)
    return np.correlate(seg, vals, mode="valid")


def modified_selberg_integral(f: ArithFnTable, N: int, h: int, j: int = 1,
                              mean: LogPolynomial | None = None) -> SelbergResult:
    """``J~_f(N, h)`` for ``j = 1``; the ``j``-th integral ``J^(j)_f(N, h)``
    otherwise, which needs a balanced table or an explicit ``mean``."""
    _check_N(N, h)
    if j < 0:
        raise ParameterDomainError("j must be nonnegative")
    if j == 1:
        p = _poly_or_raise(f, mean, True)
        r = _residual(cesaro_window_sums(f, N, h), _x_range(N), h, p)
        return SelbergResult("modified", N, h, _sum_sq(r), H=h, j=1)
    if mean is None and not f.is_balanced:
        raise PreconditionError(f"J^({j}) needs a balanced table; {f.name} is not")
    k0, vals = sample_integer_offsets(cesaro(j, float(h)))
    sums = _weighted_sums(f, k0, vals, N)
    p = None if (mean is None or mean.is_zero()) else mean
    r = _residual(sums, _x_range(N), float(np.sum(vals)), p)
    return SelbergResult("jth", N, h, _sum_sq(r), H=h, j=j)


def weighted_selberg_integral(f: ArithFnTable, w: Weight, N: int, H: int | None = None,
                              require_balanced: bool = True) -> SelbergResult:
    """``J_{w,f}(N, H)`` with ``w_H`` sampled at the integer offsets ``n - x``."""
    if H is None:
        H = int(math.ceil(w.delta))
    _check_N(N, max(H, 1))
    if require_balanced and not f.is_balanced:
        raise PreconditionError(f"table {f.name} is not balanced")
    k0, vals = sample_integer_offsets(w)
    return SelbergResult("weighted", N, H, _sum_sq(_weighted_sums(f, k0, vals, N)), H=H)


# --- brute-force oracles --------------------------------------------------

def bruteforce_selberg(f: ArithFnTable, N: int, h: int, weights: dict[int, float] | None = None,
                       p: LogPolynomial | None = None, divisor: int = 1) -> float:
    """Double loop over ``x ~ N`` and the window.  ``weights`` maps offset
    ``n - x`` to the weight (default: the sharp window ``1..h``); the window
    sum is divided by ``divisor`` and the mean ``mass * p(log x)`` subtracted."""
    if weights is None:
        weights = {k: 1 for k in range(1, h + 1)}
    mass = sum(weights.values()) / divisor
    total = []
    for x in range(N + 1, 2 * N + 1):
        s = 0
        for k, wk in weights.items():
            s += wk * f[x + k]
        s = s / divisor if divisor != 1 else s
        if p is not None:
            s = s - mass * float(p.at_log(np.array([x]))[0])
        total.append(float(abs(s)) ** 2)
    return math.fsum(total)


# --- reports ---------------------------------------------------------------

def norm_inf_range(f: ArithFnTable, N: int, H: int) -> float:
    """``||f||_oo`` over the closed range ``[N - H, 2N + H]``."""
    return f.norm_inf(max(N - H, 1), 2 * N + H)


@dataclass(frozen=True)
class DFTIdentityReport:
    N: int
    H: int
    J_truncated: float      # f cut to (N, 2N], x over all integers
    correlation_sum: float  # sum_{n,m ~ N} f(n) f(m) C_w(n - m)
    J: float                # J_{w,f}(N, H) itself
    norm_inf: float

    @property
    def identity_error(self) -> float:
        return abs(self.J_truncated - self.correlation_sum)

    @property
    def identity_rel(self) -> float:
        return self.identity_error / max(abs(self.correlation_sum), 1e-300)

    @property
    def E(self) -> float:
        return abs(self.J - self.correlation_sum)

    @property
    def normalized(self) -> float:
        den = self.H ** 3 * self.norm_inf ** 2
        return self.E / den if den > 0 else 0.0


def dft_identity_check(f: ArithFnTable, w: Weight, N: int, H: int | None = None) -> DFTIdentityReport:
    """``J_{w,f} = int |sum_{n~N} f(n) e(n a)|^2 |w^_H(a)|^2 da + O(H^3 ||f||^2)``
    with the integral evaluated exactly as a correlation sum."""
    if H is None:
        H = int(math.ceil(w.delta))
    if not f.is_balanced:
        raise PreconditionError(f"table {f.name} is not balanced")
    if f.values.dtype.kind == "c":
        raise PreconditionError("f must be real")
    k0, vals = sample_integer_offsets(w)
    tab = autocorrelation(IntWeight(k0, vals))
    f.require(N + 1, 2 * N)
    ftr = f.segment(N + 1, 2 * N).astype(float)
    corr = float(np.real(correlation_form(ftr, tab)))
    # sum over every x of |sum_n w(n - x) f_tr(n)|^2: full correlation
    full = np.correlate(np.concatenate([np.zeros(vals.size - 1), ftr, np.zeros(vals.size - 1)]),
                        vals, mode="valid")
    J_tr = _sum_sq(full)
    J = weighted_selberg_integral(f, w, N, H).value
    return DFTIdentityReport(N, H, J_tr, corr, J, norm_inf_range(f, N, H))


@dataclass(frozen=True)
class RatioReport:
    """``lhs`` against named right-hand terms; ``ratio = lhs / sum(terms)``."""

    lhs: float
    terms: dict = field(default_factory=dict)
    label: str = ""

    @property
    def rhs(self) -> float:
        return float(sum(self.terms.values()))

    @property
    def ratio(self) -> float:
        if self.lhs == 0.0:
            return 0.0
        return self.lhs / self.rhs if self.rhs > 0 else math.inf

    def row(self) -> dict:
        out = {"lhs": self.lhs}
        out.update(self.terms)
        out["ratio"] = self.ratio
        return out


def _degree(p: LogPolynomial | None) -> int:
    return 0 if p is None or p.is_zero() else p.degree


def proposition1_check(f: ArithFnTable, w: Weight, N: int) -> RatioReport:
    """``sum_x |sum_n w(n-x) f(n) - p(log x) sum_n w(n-x)|^2`` against
    ``sum_x |sum_n w(n-x) f~(n)|^2 + N^{-1} delta^4 (log N)^{2c-2}``; the last
    term is dropped for balanced ``f``."""
    if f.log_poly is None:
        raise PreconditionError(f"table {f.name} has no logarithmic polynomial")
    k0, vals = sample_integer_offsets(w)
    x = _x_range(N)
    sums = _weighted_sums(f, k0, vals, N)
    ones = ArithFnTable(f.lo, f.hi, np.ones(f.hi - f.lo + 1, dtype=f.values.dtype), "1")
    mass = _weighted_sums(ones, k0, vals, N)
    p = f.log_poly
    lhs = _sum_sq(sums - p.at_log(x) * mass) if not p.is_zero() else _sum_sq(sums)
    ft = balanced_part(f)
    main = _sum_sq(_weighted_sums(ft, k0, vals, N))
    terms = {"balanced": main}
    if not p.is_zero():
        terms["tail"] = w.delta ** 4 * math.log(N) ** (2 * _degree(p) - 2) / N
    return RatioReport(lhs, terms, f"prop1 N={N} {w.label()}")


def length_inertia_check(f: ArithFnTable, N: int, h: int, H: int) -> tuple[RatioReport, RatioReport]:
    """Length inertia for ``J_f`` and for ``J~_f`` (``f`` real).

    original: ``J_f(N,H)`` vs ``(H/h)^2 J_f(N,h) + J_f(N, H - h[H/h]) + H^3 (||f||^2 + (log N)^{2c})``
    modified: ``J~_f(N,H)`` vs ``H^2 h^-2 J~_f(N,h) + (N h^4 H^-2 + H^3) ||f||^2 + H^3 (log N)^{2c}``

    ``(log N)^{2c}`` is dropped for balanced ``f``.
    """
    if h > H:
        raise ParameterDomainError(f"need h <= H, got h={h}, H={H}")
    if h < 1:
        raise ParameterDomainError("h must be at least 1")
    if H > N ** (2.0 / 3.0) + 1e-9:
        raise ParameterDomainError(f"H={H} exceeds the N^(2/3) guard for N={N}")
    if f.log_poly is None:
        raise PreconditionError(f"table {f.name} has no logarithmic polynomial")
    f.require(N - H, 2 * N + H)
    norm2 = f.norm_inf(N - H, 2 * N + H) ** 2
    p = f.log_poly
    logterm = 0.0 if p.is_zero() else math.log(N) ** (2 * _degree(p))
    r = H - h * (H // h)
    orig = RatioReport(selberg_integral(f, N, H).value, {
        "scaled": (H / h) ** 2 * selberg_integral(f, N, h).value,
        "fraction": selberg_integral(f, N, r).value if r else 0.0,
        "tail": H ** 3 * (norm2 + logterm),
    }, f"inertia original N={N} h={h} H={H}")
    mod = RatioReport(modified_selberg_integral(f, N, H).value, {
        "scaled": (H / h) ** 2 * modified_selberg_integral(f, N, h).value,
        "sup": (N * h ** 4 / H ** 2 + H ** 3) * norm2,
        "tail": H ** 3 * logterm,
    }, f"inertia modified N={N} h={h} H={H}")
    return orig, mod


def cl_comparison(s: ArithFnTable, N: int, delta: int) -> RatioReport:
    """``sum_x |sum_n C_d(n-x) s(n)|^2`` vs
    ``sum_x |sum_{x<n<=x+d} s(n)|^2 + d^3 ||s||^2`` for real balanced ``s``."""
    if not s.is_balanced:
        raise PreconditionError(f"table {s.name} is not balanced")
    lhs = modified_selberg_integral(s, N, delta).value
    return RatioReport(lhs, {
        "sharp": selberg_integral(s, N, delta).value,
        "sup": delta ** 3 * norm_inf_range(s, N, delta) ** 2,
    }, f"CL N={N} delta={delta}")


def u_H(H: int, alpha):
    """``U_H(a) = sum_{1 <= n <= H} e(n a)``."""
    return dft(IntWeight.unit_step(H), alpha)


def u_H_bound_ratio(H: int, alpha) -> float:
    """``max |U_H(a)| / min(H, 1/|a|)`` over the sample points; the sharp
    bound ``1 / (2 ||a||)`` keeps this at most 1."""
    al = np.atleast_1d(np.asarray(alpha, dtype=float))
    with np.errstate(divide="ignore"):
        bound = np.minimum(float(H), np.where(al == 0, np.inf, 1.0 / np.abs(al)))
    return float(np.max(np.abs(u_H(H, al)) / bound))


def parseval_F(f: ArithFnTable, N: int) -> tuple[float, float]:
    """``(int_{|a| <= 1/2} |F_N(a)|^2 da, sum_{n ~ N} f(n)^2)``."""
    f.require(N + 1, 2 * N)
    w = IntWeight(N + 1, f.segment(N + 1, 2 * N).astype(float))
    M = parseval_grid(N).size
    return trig_mean(np.abs(dft_on_grid(w, M)) ** 2), float(np.sum(np.abs(w.values) ** 2))


def j3_probe(N: int, h: int, table: ArithFnTable | None = None) -> float:
    """``J_{d_3}(N, h) / (N h log^4 N)``: recorded, never asserted."""
    if table is None:
        table = divisor_table(3, N + 1, 2 * N + h)
    return selberg_integral(table, N, h).value / (N * h * math.log(N) ** 4)
