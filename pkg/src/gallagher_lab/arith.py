"""Arithmetic-function tables, divisor functions and logarithmic polynomials."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterDomainError, PreconditionError, RangeCoverageError, ResourceError

EULER_GAMMA = float(np.euler_gamma)
# first Stieltjes constant
STIELTJES_1 = -0.072815845483676724860586375874901319
MAX_TABLE = 10 ** 8


@dataclass(frozen=True, eq=False)
class LogPolynomial:
    """``p(u) = sum c_i u^i`` in ``u = log x``; the short-interval mean value is
    ``M(x, h) = h p(log x)``."""

    coefficients: np.ndarray = field(default_factory=lambda: np.zeros(1))

    def __post_init__(self):
        c = np.array(self.coefficients, dtype=float).ravel()
        if c.size == 0:
            c = np.zeros(1)
        nz = np.flatnonzero(c)
        c = c[: nz[-1] + 1] if nz.size else np.zeros(1)
        object.__setattr__(self, "coefficients", c)

    @property
    def degree(self) -> int:
        """Degree, with the zero polynomial counted as degree 0."""
        return self.coefficients.size - 1

    def is_zero(self) -> bool:
        return not np.any(self.coefficients)

    def __call__(self, u):
        return np.polynomial.polynomial.polyval(u, self.coefficients)

    def at_log(self, x):
        return self(np.log(np.asarray(x, dtype=float)))

    def mean_value(self, x, h):
        return h * self.at_log(x)

    def derivative(self) -> "LogPolynomial":
        return LogPolynomial(np.polynomial.polynomial.polyder(self.coefficients))


ZERO_POLY = LogPolynomial(np.zeros(1))


@dataclass(frozen=True, eq=False)
class ArithFnTable:
    """Values ``f(n)`` for ``lo <= n <= hi``."""

    lo: int
    hi: int
    values: np.ndarray
    name: str = "f"
    log_poly: LogPolynomial | None = None

    def __post_init__(self):
        if not 1 <= self.lo <= self.hi:
            raise ParameterDomainError("need 1 <= lo <= hi")
        v = np.asarray(self.values)
        if v.dtype.kind not in "iuf":
            v = v.astype(float)
        v = v.ravel().copy()
        if v.size != self.hi - self.lo + 1:
            raise ValueError("values length does not match [lo, hi]")
        if v.dtype.kind == "f" and not np.all(np.isfinite(v)):
            raise ValueError("non-finite table value")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def is_integer(self) -> bool:
        return self.values.dtype.kind in "iu"

    @property
    def is_balanced(self) -> bool:
        return self.log_poly is not None and self.log_poly.is_zero()

    def require(self, a: int, b: int) -> None:
        if a < self.lo or b > self.hi:
            raise RangeCoverageError(
                f"table {self.name} covers [{self.lo}, {self.hi}], need [{a}, {b}]")

    def segment(self, a: int, b: int) -> np.ndarray:
        """``f(a..b)``, zero outside the table (callers check coverage first)."""
        out = np.zeros(b - a + 1, dtype=self.values.dtype)
        i0, i1 = max(a, self.lo), min(b, self.hi)
        if i0 <= i1:
            out[i0 - a: i1 - a + 1] = self.values[i0 - self.lo: i1 - self.lo + 1]
        return out

    def __getitem__(self, n: int):
        if not self.lo <= n <= self.hi:
            raise RangeCoverageError(f"n={n} outside [{self.lo}, {self.hi}]")
        return self.values[n - self.lo]

    def norm_inf(self, a: int, b: int) -> float:
        """``max_{a <= n <= b} |f(n)|``."""
        self.require(a, b)
        return float(np.max(np.abs(self.segment(a, b)))) if b >= a else 0.0

    def with_log_poly(self, p: LogPolynomial | None) -> "ArithFnTable":
        return ArithFnTable(self.lo, self.hi, self.values, self.name, p)


def divisor_values(k: int, hi: int) -> np.ndarray:
    """``d_k(n)`` for ``0 <= n <= hi`` (entry 0 unused), by ``k - 1`` Dirichlet
    convolutions with the constant function 1.  Sequential; single-threaded."""
    if k < 1:
        raise ParameterDomainError("k must be a positive integer")
    if hi > MAX_TABLE:
        raise ResourceError(f"divisor table up to {hi} exceeds the {MAX_TABLE} guard")
    prev = np.ones(hi + 1, dtype=np.int64)
    prev[0] = 0
    half = hi // 2
    for _ in range(k - 1):
        out = np.zeros_like(prev)
        for d in range(1, half + 1):
            out[d::d] += prev[d]
        # d > hi/2 has the single multiple d itself
        out[half + 1:] += prev[half + 1:]
        prev = out
    return prev


def divisor_table(k: int, lo: int, hi: int) -> ArithFnTable:
    if not 1 <= lo <= hi:
        raise ParameterDomainError("need 1 <= lo <= hi")
    if hi > MAX_TABLE:
        raise ResourceError(f"divisor table up to {hi} exceeds the {MAX_TABLE} guard")
    vals = divisor_values(k, hi)[lo:]
    p = log_polynomial_dk(k) if k <= 3 else None
    return ArithFnTable(lo, hi, vals, f"d{k}", p)


def divisor_bruteforce(k: int, n: int) -> int:
    """Ordered factorisations ``n = n_1 ... n_k`` by recursion over divisors."""
    if k == 1:
        return 1
    return sum(divisor_bruteforce(k - 1, n // d) for d in range(1, n + 1) if n % d == 0)


def log_polynomial_dk(k: int) -> LogPolynomial:
    """``Res_{s=1} zeta(s)^k x^{s-1}`` as a polynomial in ``log x``.

    With ``zeta(s) = 1/(s-1) + gamma - gamma_1 (s-1) + ...``:
    ``p_1 = 1``, ``p_2 = u + 2 gamma``,
    ``p_3 = u^2/2 + 3 gamma u + 3 gamma^2 - 3 gamma_1``.
    """
    g, g1 = EULER_GAMMA, STIELTJES_1
    if k == 1:
        return LogPolynomial([1.0])
    if k == 2:
        return LogPolynomial([2.0 * g, 1.0])
    if k == 3:
        return LogPolynomial([3.0 * g * g - 3.0 * g1, 3.0 * g, 0.5])
    raise ParameterDomainError("logarithmic polynomials are built in for k = 1, 2, 3 only")


@dataclass(frozen=True)
class FitReport:
    k: int
    derived: np.ndarray
    fitted: np.ndarray
    rel_err: np.ndarray

    @property
    def passed(self) -> bool:
        return bool(np.all(self.rel_err < 0.01))


def fit_log_polynomial(k: int, x_lo: int = 10 ** 5, x_hi: int = 10 ** 6,
                       values: np.ndarray | None = None) -> FitReport:
    """Least-squares oracle for ``p_{d_k}``.

    ``sum_{n <= x} d_k(n) = x Q(log x) + error`` with ``p = Q + Q'``.  The
    error term is smoothed by fitting the first Riesz mean
    ``int_1^x sum_{n <= t} d_k(n) dt = x^2 R(log x) + ...``, where
    ``Q = 2R + R'``; the fit runs on a log-spaced grid of ``x`` in
    ``[x_lo, x_hi]``.
    """
    if values is None:
        values = divisor_values(k, x_hi)
    deg = k - 1
    cum = np.cumsum(values[: x_hi + 1].astype(float))  # D(n) = sum_{m <= n}
    riesz = np.concatenate([[0.0], np.cumsum(cum[1:-1])])  # int_1^{n} D(t) dt, n = 1..x_hi
    xs = np.unique(np.geomspace(x_lo, x_hi, 4000).astype(int))
    u = np.log(xs)
    y = riesz[xs - 1] / xs.astype(float) ** 2
    A = np.vander(u - u.mean(), deg + 1, increasing=True)
    # fit in centred u for conditioning, then re-expand
    coef_c, *_ = np.linalg.lstsq(A, y, rcond=None)
    P = np.polynomial.Polynomial(coef_c)
    R = P(np.polynomial.Polynomial([-u.mean(), 1.0]))
    Q = 2.0 * R + R.deriv()
    p = Q + Q.deriv()
    fitted = np.pad(p.coef, (0, deg + 1 - p.coef.size))[: deg + 1]
    derived = log_polynomial_dk(k).coefficients
    derived = np.pad(derived, (0, deg + 1 - derived.size))
    rel = np.abs(fitted - derived) / np.maximum(np.abs(derived), 1e-300)
    return FitReport(k, derived, fitted, rel)


def balanced_part(f: ArithFnTable) -> ArithFnTable:
    """``f(n) - p_f(log n)``, tagged as balanced."""
    if f.log_poly is None:
        raise PreconditionError(f"table {f.name} has no logarithmic polynomial")
    if f.log_poly.is_zero():
        return f
    n = np.arange(f.lo, f.hi + 1)
    vals = f.values - f.log_poly.at_log(n)
    return ArithFnTable(f.lo, f.hi, vals, f"{f.name}~", ZERO_POLY)


def constant_table(c: float, lo: int, hi: int, name: str = "const") -> ArithFnTable:
    vals = np.full(hi - lo + 1, c, dtype=np.int64 if float(c).is_integer() else float)
    return ArithFnTable(lo, hi, vals, name, LogPolynomial([c]))


def table_from_csv(path: str, name: str | None = None) -> ArithFnTable:
    """Rows ``n, f(n)`` over consecutive ``n``.  An optional first row starting
    with ``logpoly`` lists ``c_0, c_1, ...`` of the logarithmic polynomial."""
    rows, poly = [], None
    with open(path, newline="") as fh:
        for rec in csv.reader(fh):
            if not rec or rec[0].strip().startswith("#"):
                continue
            if rec[0].strip().lower() == "logpoly":
                poly = LogPolynomial([float(v) for v in rec[1:] if v.strip()])
                continue
            try:
                rows.append((int(rec[0]), float(rec[1])))
            except ValueError:
                continue  # header
    if not rows:
        raise ValueError(f"no data rows in {path}")
    rows.sort()
    ns = np.array([r[0] for r in rows])
    if np.any(np.diff(ns) != 1):
        raise ValueError("custom table must list consecutive n")
    vals = np.array([r[1] for r in rows])
    if np.all(vals == np.round(vals)):
        vals = vals.astype(np.int64)
    return ArithFnTable(int(ns[0]), int(ns[-1]), vals, name or "custom", poly)


def log_factor(N: float, c: int, power_offset: int = 0) -> float:
    """``(log N)^(2c + power_offset)``, dropped (0) for the zero polynomial."""
    return math.log(N) ** (2 * c + power_offset)
