"""Exact piecewise-polynomial weights and their convolution algebra.

Every weight is held as a compactly supported spline: a strictly increasing
list of breakpoints and, per interval ``[b_i, b_{i+1})``, a row of polynomial
coefficients in ascending degree in the local variable ``x - b_i``.  The last
interval is closed on the right, so ``C_delta(delta) = 0`` and
``1_delta(delta) = 1`` come out of the spline itself.

Convolutions are computed symbolically per output piece (Beta-function
moments and Taylor shifts), never by quadrature.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateInputError, ParameterDomainError

MAX_DEGREE = 64

# Breakpoints closer than this (relative to the support scale) are identified.
_SNAP_RTOL = 1e-12


@lru_cache(maxsize=None)
def _binomials(n: int) -> np.ndarray:
    """Pascal triangle ``B[i, k] = C(i, k)`` as floats, ``0 <= k <= i < n``."""
    out = np.zeros((n, n))
    for i in range(n):
        for k in range(i + 1):
            out[i, k] = math.comb(i, k)
    return out


@lru_cache(maxsize=None)
def _factorials(n: int) -> np.ndarray:
    return np.array([float(math.factorial(k)) for k in range(n)])


def _shift_matrix(n: int, h: float) -> np.ndarray:
    # new[k] = sum_{i >= k} C(i, k) h^(i-k) c[i]
    binom = _binomials(n).T  # binom[k, i] = C(i, k)
    expo = np.subtract.outer(np.arange(n), np.arange(n)).T  # expo[k, i] = i - k
    with np.errstate(invalid="ignore"):
        powers = np.where(expo >= 0, float(h) ** np.maximum(expo, 0), 0.0)
    return binom * powers


def taylor_shift(coeffs: np.ndarray, h: float) -> np.ndarray:
    """Coefficients of ``u -> p(u + h)`` given those of ``p`` (ascending)."""
    c = np.asarray(coeffs, dtype=float)
    if h == 0.0 or c.shape[-1] <= 1:
        return c.copy()
    return c @ _shift_matrix(c.shape[-1], h).T


def _reflect_local(coeffs: np.ndarray, length: float) -> np.ndarray:
    """Coefficients of ``u -> p(length - u)``."""
    r = taylor_shift(coeffs, length)
    r[1::2] *= -1.0
    return r


def _poly_horner(coeffs: np.ndarray, u: np.ndarray) -> np.ndarray:
    # coeffs: (m, d+1) row per point, u: (m,)
    acc = np.zeros(u.shape, dtype=coeffs.dtype)
    for k in range(coeffs.shape[1] - 1, -1, -1):
        acc = acc * u + coeffs[:, k]
    return acc


@dataclass(frozen=True, eq=False)
class PiecewisePolynomial:
    """Compactly supported spline, zero outside ``[breakpoints[0], breakpoints[-1]]``."""

    breakpoints: np.ndarray
    coeffs: np.ndarray

    def __post_init__(self):
        bp = np.array(self.breakpoints, dtype=float).ravel()
        co = np.array(self.coeffs, dtype=float)
        if co.ndim == 1:
            co = co[:, None]
        if bp.size < 2:
            raise ValueError("a spline needs at least two breakpoints")
        if not np.all(np.diff(bp) > 0):
            raise ValueError("breakpoints must be strictly increasing")
        if co.shape[0] != bp.size - 1:
            raise ValueError(
                f"{bp.size - 1} intervals but {co.shape[0]} coefficient rows")
        if not (np.all(np.isfinite(bp)) and np.all(np.isfinite(co))):
            raise ValueError("breakpoints and coefficients must be finite")
        # drop trailing all-zero degree columns
        nz = np.flatnonzero(np.any(co != 0.0, axis=0))
        co = co[:, : (nz[-1] + 1 if nz.size else 1)]
        if co.shape[1] - 1 > MAX_DEGREE:
            raise ParameterDomainError(
                f"spline degree {co.shape[1] - 1} exceeds the bound {MAX_DEGREE}")
        bp.setflags(write=False)
        co.setflags(write=False)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "coeffs", co)

    # -- basic queries -------------------------------------------------
    @property
    def n_pieces(self) -> int:
        return self.coeffs.shape[0]

    @property
    def degree(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def support(self) -> tuple[float, float]:
        return float(self.breakpoints[0]), float(self.breakpoints[-1])

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.breakpoints)

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def __call__(self, x):
        x_arr = np.asarray(x, dtype=float)
        flat = x_arr.ravel()
        bp = self.breakpoints
        idx = np.searchsorted(bp, flat, side="right") - 1
        idx = np.where(flat == bp[-1], self.n_pieces - 1, idx)
        inside = (idx >= 0) & (idx < self.n_pieces)
        out = np.zeros(flat.shape)
        if np.any(inside):
            k = idx[inside]
            out[inside] = _poly_horner(self.coeffs[k], flat[inside] - bp[k])
        out = out.reshape(x_arr.shape)
        return float(out) if out.ndim == 0 else out

    # -- algebra -------------------------------------------------------
    def scale(self, factor: float) -> "PiecewisePolynomial":
        return PiecewisePolynomial(self.breakpoints, self.coeffs * float(factor))

    def reflect(self) -> "PiecewisePolynomial":
        """The spline ``x -> p(-x)``."""
        bp = -self.breakpoints[::-1]
        rows = [_reflect_local(c, L) for c, L in zip(self.coeffs, self.lengths)]
        return PiecewisePolynomial(bp, np.array(rows[::-1]))

    def dilate(self, factor: float) -> "PiecewisePolynomial":
        """The spline ``x -> p(x / factor)`` for ``factor > 0``."""
        if factor <= 0:
            raise ParameterDomainError("dilation factor must be positive")
        k = np.arange(self.degree + 1)
        return PiecewisePolynomial(self.breakpoints * factor,
                                   self.coeffs / float(factor) ** k)

    def refine(self, points: Iterable[float]) -> "PiecewisePolynomial":
        """Same function, with extra breakpoints inserted inside the support."""
        lo, hi = self.support
        extra = [p for p in points if lo < p < hi]
        bp = np.union1d(self.breakpoints, extra)
        mids = 0.5 * (bp[:-1] + bp[1:])
        src = np.searchsorted(self.breakpoints, mids, side="right") - 1
        rows = [taylor_shift(self.coeffs[s], b - self.breakpoints[s])
                for s, b in zip(src, bp[:-1])]
        return PiecewisePolynomial(bp, np.array(rows))

    def restrict(self, lo: float, hi: float) -> "PiecewisePolynomial":
        """Truncation to ``[lo, hi]`` (zero elsewhere)."""
        if not hi > lo:
            raise ParameterDomainError("restriction needs lo < hi")
        a, b = self.support
        lo_c, hi_c = max(lo, a), min(hi, b)
        if hi_c <= lo_c:
            return zero_spline(lo, hi)
        r = self.refine([lo_c, hi_c])
        keep = (r.breakpoints[:-1] >= lo_c) & (r.breakpoints[1:] <= hi_c)
        idx = np.flatnonzero(keep)
        return PiecewisePolynomial(r.breakpoints[idx[0]: idx[-1] + 2], r.coeffs[idx])

    def integral(self) -> float:
        k = np.arange(self.degree + 1)
        L = self.lengths[:, None]
        return float(np.sum(self.coeffs * L ** (k + 1) / (k + 1)))

    def coalesce(self, rtol: float = 1e-12) -> "PiecewisePolynomial":
        """Merge neighbours carrying the same polynomial and trim zero tails."""
        bp = list(self.breakpoints)
        rows = [np.array(r) for r in self.coeffs]
        i = 0
        while i < len(rows) - 1:
            a = taylor_shift(rows[i], bp[i + 1] - bp[i])
            b = rows[i + 1]
            # coefficient-by-coefficient: B-spline neighbours differ only in the
            # top coefficient, which is negligible against the others in size
            if np.all(np.abs(a - b) <= rtol * np.maximum(np.abs(a), np.abs(b))):
                del rows[i + 1]
                del bp[i + 1]
            else:
                i += 1
        while len(rows) > 1 and not np.any(rows[0]):
            del rows[0]
            del bp[0]
        while len(rows) > 1 and not np.any(rows[-1]):
            del rows[-1]
            del bp[-1]
        return PiecewisePolynomial(np.array(bp), np.array(rows))

    def allclose(self, other: "PiecewisePolynomial", atol: float = 1e-12) -> bool:
        """Coefficient-wise comparison on the common refinement."""
        a, b = _common_refinement(self, other)
        if a.breakpoints.shape != b.breakpoints.shape:
            return False
        if not np.allclose(a.breakpoints, b.breakpoints, rtol=0, atol=atol):
            return False
        d = max(a.coeffs.shape[1], b.coeffs.shape[1])
        return bool(np.allclose(_pad(a.coeffs, d), _pad(b.coeffs, d), rtol=0, atol=atol))

    def max_coeff_diff(self, other: "PiecewisePolynomial") -> float:
        a, b = _common_refinement(self, other)
        d = max(a.coeffs.shape[1], b.coeffs.shape[1])
        return float(np.max(np.abs(_pad(a.coeffs, d) - _pad(b.coeffs, d))))

    # -- serialization -------------------------------------------------
    def to_rows(self) -> list[list[float]]:
        return [[float(self.breakpoints[i]), float(self.breakpoints[i + 1]), *map(float, c)]
                for i, c in enumerate(self.coeffs)]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["b_left", "b_right"] + [f"c{k}" for k in range(self.degree + 1)])
        for row in self.to_rows():
            w.writerow([repr(v) for v in row])
        return buf.getvalue()

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "PiecewisePolynomial":
        rows = [list(map(float, r)) for r in rows]
        if not rows:
            raise ValueError("no spline rows")
        for r0, r1 in zip(rows, rows[1:]):
            if r0[1] != r1[0]:
                raise ValueError("spline rows must be contiguous")
        d = max(len(r) - 2 for r in rows)
        bp = [rows[0][0]] + [r[1] for r in rows]
        co = np.zeros((len(rows), d))
        for i, r in enumerate(rows):
            co[i, : len(r) - 2] = r[2:]
        return cls(np.array(bp), co)

    @classmethod
    def from_csv(cls, text: str) -> "PiecewisePolynomial":
        rows = []
        for rec in csv.reader(io.StringIO(text)):
            if not rec or rec[0].strip().lower().startswith("b"):
                continue
            rows.append([float(v) for v in rec if v.strip() != ""])
        return cls.from_rows(rows)


def _pad(c: np.ndarray, d: int) -> np.ndarray:
    return np.pad(c, ((0, 0), (0, d - c.shape[1])))


def _common_refinement(p: PiecewisePolynomial, q: PiecewisePolynomial):
    lo = min(p.support[0], q.support[0])
    hi = max(p.support[1], q.support[1])
    p2, q2 = _extend(p, lo, hi), _extend(q, lo, hi)
    pts = np.union1d(p2.breakpoints, q2.breakpoints)
    pts = _snap(pts, (hi - lo) * _SNAP_RTOL)
    return p2.refine(pts), q2.refine(pts)


def _extend(p: PiecewisePolynomial, lo: float, hi: float) -> PiecewisePolynomial:
    bp, co = list(p.breakpoints), list(p.coeffs)
    if lo < bp[0]:
        bp.insert(0, lo)
        co.insert(0, np.zeros(p.degree + 1))
    if hi > bp[-1]:
        bp.append(hi)
        co.append(np.zeros(p.degree + 1))
    return PiecewisePolynomial(np.array(bp), np.array(co))


def _snap(points: np.ndarray, tol: float) -> np.ndarray:
    pts = np.sort(np.asarray(points, dtype=float))
    keep = [pts[0]]
    for v in pts[1:]:
        if v - keep[-1] > tol:
            keep.append(v)
    return np.array(keep)


def zero_spline(lo: float = 0.0, hi: float = 1.0) -> PiecewisePolynomial:
    return PiecewisePolynomial(np.array([lo, hi]), np.zeros((1, 1)))


# ---------------------------------------------------------------------------
# convolution
# ---------------------------------------------------------------------------

def _conv_rising(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """``z -> int_0^z p(u) q(z - u) du`` as a polynomial in ``z``.

    Uses int_0^z u^i (z-u)^j du = z^(i+j+1) i! j! / (i+j+1)!.
    """
    fp, fq = _factorials(p.size), _factorials(q.size)
    s = np.convolve(p * fp, q * fq)
    out = np.zeros(s.size + 1)
    out[1:] = s / _factorials(s.size + 1)[1:]
    return out


def _conv_plateau(p: np.ndarray, L1: float, q: np.ndarray) -> np.ndarray:
    """``s -> int_0^L1 p(L1 - v) q(s + v) dv`` as a polynomial in ``s``."""
    pr = _reflect_local(p, L1)
    dq = q.size - 1
    i = np.arange(pr.size)
    mu = np.array([np.sum(pr * L1 ** (i + k + 1) / (i + k + 1)) for k in range(dq + 1)])
    out = np.zeros(dq + 1)
    binom = _binomials(dq + 1)
    for m in range(dq + 1):
        j = np.arange(m, dq + 1)
        out[m] = np.sum(q[j] * binom[j, m] * mu[j - m])
    return out


def _conv_pair(p: np.ndarray, L1: float, q: np.ndarray, L2: float):
    """Convolution of ``p 1_[0,L1)`` with ``q 1_[0,L2)`` as (start, end, coeffs) pieces."""
    if L1 > L2:
        p, L1, q, L2 = q, L2, p, L1
    deg = p.size + q.size
    pieces = [(0.0, L1, _conv_rising(p, q))]
    if L2 > L1:
        pieces.append((L1, L2, _conv_plateau(p, L1, q)))
    falling = _conv_rising(_reflect_local(p, L1), _reflect_local(q, L2))
    pieces.append((L2, L1 + L2, _reflect_local(falling, L1)))
    return [(a, b, np.pad(c, (0, deg - c.size))) for a, b, c in pieces]


def convolve(p: PiecewisePolynomial, q: PiecewisePolynomial) -> PiecewisePolynomial:
    """Exact convolution ``(p * q)(x) = int p(t) q(x - t) dt``.

    The support of the result is the Minkowski sum of the supports and its
    degree is ``deg p + deg q + 1``.
    """
    lo = p.support[0] + q.support[0]
    hi = p.support[1] + q.support[1]
    if p.is_zero() or q.is_zero():
        return zero_spline(lo, hi)
    deg = p.degree + q.degree + 2  # coefficient count
    if deg - 1 > MAX_DEGREE:
        raise ParameterDomainError(
            f"convolution degree {deg - 1} exceeds the bound {MAX_DEGREE}")

    parts = []
    for i, (pc, L1) in enumerate(zip(p.coeffs, p.lengths)):
        if not np.any(pc):
            continue
        for j, (qc, L2) in enumerate(zip(q.coeffs, q.lengths)):
            if not np.any(qc):
                continue
            off = p.breakpoints[i] + q.breakpoints[j]
            for a, b, c in _conv_pair(pc, L1, qc, L2):
                if b > a:
                    parts.append((off + a, off + b, c))

    tol = (hi - lo) * _SNAP_RTOL
    grid = _snap(np.array([lo, hi] + [v for a, b, _ in parts for v in (a, b)]), tol)
    grid[0], grid[-1] = lo, hi
    acc = np.zeros((grid.size - 1, deg))
    for a, b, c in parts:
        ia = int(np.argmin(np.abs(grid - a)))
        ib = int(np.argmin(np.abs(grid - b)))
        for k in range(ia, ib):
            acc[k] += taylor_shift(c, grid[k] - a)
    return PiecewisePolynomial(grid, acc).coalesce()


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------

FAMILIES = ("unit_interval", "unit_step", "cesaro", "lanczos", "custom")
EVEN_FAMILIES = ("unit_interval", "cesaro", "lanczos")


@dataclass(frozen=True, eq=False)
class Weight:
    """A named weight with its exact spline.

    ``delta`` is the support radius: the smallest ``R`` with the support of
    the spline inside ``[-R, R]``.
    """

    family: str
    params: dict
    spline: PiecewisePolynomial = field(repr=False)
    transform_kind: str = "generic"

    @property
    def delta(self) -> float:
        a, b = self.spline.support
        return float(max(abs(a), abs(b)))

    def __call__(self, x):
        return eval_weight(self, x)

    def label(self) -> str:
        if self.family == "custom":
            return "custom"
        short = {"unit_interval": "unit", "unit_step": "step"}.get(self.family, self.family)
        body = ",".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{short}:{body}"


def _require_positive(**kw):
    for name, v in kw.items():
        if not (isinstance(v, (int, float, np.floating, np.integer)) and v > 0
                and math.isfinite(v)):
            raise ParameterDomainError(f"{name} must be a positive real, got {v!r}")


def unit_interval(delta: float) -> Weight:
    _require_positive(delta=delta)
    s = PiecewisePolynomial(np.array([-delta, delta]), np.ones((1, 1)))
    return Weight("unit_interval", {"delta": float(delta)}, s, "unit_interval")


def unit_step(delta: float) -> Weight:
    _require_positive(delta=delta)
    s = PiecewisePolynomial(np.array([0.0, delta]), np.ones((1, 1)))
    return Weight("unit_step", {"delta": float(delta)}, s, "unit_step")


def _triangle(delta: float) -> PiecewisePolynomial:
    return PiecewisePolynomial(np.array([-delta, 0.0, delta]),
                               np.array([[0.0, 1.0 / delta], [1.0, -1.0 / delta]]))


def lanczos(delta: float, Delta: float) -> Weight:
    """Trapezoid: 1 on ``|x| <= delta - Delta``, linear down to 0 at ``|x| = delta``."""
    _require_positive(delta=delta, Delta=Delta)
    if Delta > delta:
        raise ParameterDomainError(f"lanczos needs delta >= Delta, got {delta} < {Delta}")
    flat = delta - Delta
    if flat == 0.0:
        s = _triangle(delta)
    else:
        s = PiecewisePolynomial(
            np.array([-delta, -flat, flat, delta]),
            np.array([[0.0, 1.0 / Delta], [1.0, 0.0], [1.0, -1.0 / Delta]]))
    return Weight("lanczos", {"delta": float(delta), "Delta": float(Delta)}, s, "lanczos")


def normalized_self_convolution(w: Weight) -> Weight:
    """``(1 / (2 delta)) (w * w)`` where ``delta`` is the support radius of ``w``."""
    if w.spline.is_zero():
        raise DegenerateInputError("normalized self-convolution of the zero weight")
    radius = w.delta
    spline = convolve(w.spline, w.spline).scale(1.0 / (2.0 * radius))
    return Weight("custom", {"delta": 2.0 * radius}, spline, "generic")


@lru_cache(maxsize=64)
def _cesaro_spline(j: int, delta: float) -> PiecewisePolynomial:
    if j == 0:
        return unit_interval(delta).spline
    half = Weight("custom", {}, _cesaro_spline(j - 1, delta / 2.0))
    return normalized_self_convolution(half).spline


def cesaro_family(j: int, delta: float) -> Weight:
    """``C^(j)_delta``: the unit interval for ``j = 0``, then
    ``C^(j)_delta = normalized self-convolution of C^(j-1)_{delta/2}``.

    ``C^(j)`` has ``2^j`` pieces of degree ``2^j - 1``, so ``j <= 6``.
    """
    if not isinstance(j, (int, np.integer)) or j < 0:
        raise ParameterDomainError(f"cesaro order must be a nonnegative integer, got {j!r}")
    _require_positive(delta=delta)
    if 2 ** j - 1 > MAX_DEGREE:
        raise ParameterDomainError(f"cesaro order {j} exceeds the degree bound {MAX_DEGREE}")
    return Weight("cesaro", {"j": int(j), "delta": float(delta)},
                  _cesaro_spline(int(j), float(delta)), "cesaro")


def cesaro(j: int, delta: float) -> Weight:
    """Built-in Cesaro weight: closed formulas for ``j <= 1``, recursion beyond."""
    if isinstance(j, (int, np.integer)) and j in (0, 1):
        _require_positive(delta=delta)
        s = unit_interval(delta).spline if j == 0 else _triangle(delta)
        return Weight("cesaro", {"j": int(j), "delta": float(delta)}, s, "cesaro")
    return cesaro_family(j, delta)


def custom(spline: PiecewisePolynomial) -> Weight:
    return Weight("custom", {"delta": float(max(abs(v) for v in spline.support))}, spline)


def make_weight(family: str, **params) -> Weight:
    fam = {"unit": "unit_interval", "step": "unit_step"}.get(family, family)
    try:
        if fam == "unit_interval":
            return unit_interval(params["delta"])
        if fam == "unit_step":
            return unit_step(params["delta"])
        if fam == "cesaro":
            j = params.get("j", 1)
            if float(j) != int(j):
                raise ParameterDomainError(f"cesaro order must be an integer, got {j!r}")
            return cesaro(int(j), params["delta"])
        if fam == "lanczos":
            return lanczos(params["delta"], params["Delta"])
        if fam == "custom":
            return custom(params["spline"])
    except KeyError as exc:
        raise ParameterDomainError(f"missing parameter {exc.args[0]!r} for {family}") from None
    raise ParameterDomainError(f"unknown weight family {family!r}")


def parse_weight_spec(spec: str) -> Weight:
    """Parse ``"cesaro:j=2,delta=1.5"``-style specs (``unit``, ``step``, ``cesaro``,
    ``lanczos``; ``custom:<file.csv>`` reads a spline CSV)."""
    family, _, body = spec.strip().partition(":")
    family = family.strip().lower()
    if family == "custom":
        with open(body, encoding="utf-8") as fh:
            return custom(PiecewisePolynomial.from_csv(fh.read()))
    params = {}
    for item in filter(None, (s.strip() for s in body.split(","))):
        key, eq, val = item.partition("=")
        if not eq:
            raise ParameterDomainError(f"malformed weight parameter {item!r} in {spec!r}")
        try:
            params[key.strip()] = float(val)
        except ValueError:
            raise ParameterDomainError(f"non-numeric value in {item!r}") from None
    return make_weight(family, **params)


def eval_weight(w: Weight, x):
    """Spline value with the compact-support-zero convention.

    The step weight lives on ``(0, delta]``; its value at 0 is 0.  Even
    built-in families are evaluated at ``|x|`` so evenness holds bit for bit.
    """
    if w.family in EVEN_FAMILIES:
        x = np.abs(x) if np.ndim(x) else abs(float(x))
    out = w.spline(x)
    if w.family == "unit_step":
        out = np.where(np.asarray(x) <= 0.0, 0.0, out)
        out = float(out) if np.ndim(out) == 0 else out
    return out


def sample_integer_offsets(w: Weight) -> tuple[int, np.ndarray]:
    """Integer samples ``w(k)`` on the smallest integer range covering the support.

    Returns ``(k_min, values)`` so that ``values[i] = w(k_min + i)``.
    """
    a, b = w.spline.support
    k = np.arange(math.floor(a), math.ceil(b) + 1)
    return int(k[0]), np.asarray(eval_weight(w, k.astype(float)), dtype=float)
