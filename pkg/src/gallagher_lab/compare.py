"""Weight comparison: ``v`` is T-better than ``w`` when

    r / m >= |v^(y)|^2 / |w^(y)|^2   for every real y,

with ``m = min_{|t|<=T} |w^(t)|^2`` and ``r = min_{|t|<=T} |v^(t)|^2``.  The
"for every y" is checked on a finite scan; "almost T-better" is reported as the
measure fraction of violating scan cells: the verdict is ``almost_T_better``
when the inequality holds on the band ``|y| <= T`` and fails only outside it,
``not_T_better`` when it fails inside the band.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterDomainError, PreconditionError
from .transforms import abs_sq, min_sq_on_interval, transform
from .weights import Weight, cesaro, lanczos, unit_interval

SCAN_POINTS = 2 ** 14
REFINE_POINTS = 64
# relative slack before a grid point counts as a violation
VIOLATION_RTOL = 1e-10
# tiny |w^|^2 relative to |w^(0)|^2 counts as a zero
ZERO_RTOL = 1e-28

VERDICTS = ("T_better", "almost_T_better", "not_T_better")


@dataclass(frozen=True)
class ScanSpec:
    y_max: float | None = None
    n: int = SCAN_POINTS
    refine: bool = True

    @classmethod
    def parse(cls, text: str | None) -> "ScanSpec":
        """``"ymax=40,n=4096"`` style specs."""
        if not text:
            return cls()
        kw = {}
        for part in text.split(","):
            key, _, val = part.partition("=")
            key = key.strip().lower()
            if key == "ymax":
                kw["y_max"] = float(val)
            elif key == "n":
                kw["n"] = int(val)
            elif key == "refine":
                kw["refine"] = val.strip().lower() not in ("0", "false", "no")
            else:
                raise ParameterDomainError(f"unknown scan key {key!r}")
        return cls(**kw)


@dataclass
class ComparisonReport:
    v: str
    w: str
    T: float
    m: float
    r: float
    ratio_threshold: float
    y: np.ndarray
    ratio: np.ndarray
    violation: np.ndarray
    violation_fraction: float
    violation_in_band: bool
    verdict: str
    gain_bound: float
    y_max: float = 0.0
    violation_set: list = field(default_factory=list)

    def rows(self):
        for y, q, flag in zip(self.y, self.ratio, self.violation):
            yield float(y), float(q), self.ratio_threshold, int(bool(flag))


def _minima(w: Weight, T: float, name: str) -> float:
    m = min_sq_on_interval(w, T).m
    if m == 0.0:
        raise PreconditionError(f"{name} transform vanishes on [-T, T] ({w.label()})")
    return m


def gain_bound(w: Weight, v: Weight, T: float) -> float:
    """``(|w^(0)|^2 / m - 1) |v^(0)|^2 / r`` (positive weights)."""
    m = _minima(w, T, "w")
    r = _minima(v, T, "v")
    return (float(abs_sq(w, 0.0)) / m - 1.0) * float(abs_sq(v, 0.0)) / r


def pointwise_gain(w: Weight, v: Weight, T: float, y) -> np.ndarray:
    """``|w^(y)|^2 / m - |v^(y)|^2 / r``."""
    m = _minima(w, T, "w")
    r = _minima(v, T, "v")
    return abs_sq(w, y) / m - abs_sq(v, y) / r


def _local_minima(g: np.ndarray) -> np.ndarray:
    inner = np.flatnonzero((g[1:-1] <= g[:-2]) & (g[1:-1] <= g[2:])) + 1
    return inner


def _scan_grid(v: Weight, w: Weight, T: float, scan: ScanSpec) -> tuple[np.ndarray, float]:
    scale = 1.0 / max(min(v.delta, w.delta), 1e-300)
    y_max = scan.y_max if scan.y_max is not None else 8.0 * max(scale, T)
    y = np.linspace(0.0, y_max, scan.n)
    if not scan.refine:
        return y, y_max
    h = y[1] - y[0]
    # dense points within two base cells of every near-zero of either transform
    half = 2.0 * h
    extra = []
    for wt in (w, v):
        g = abs_sq(wt, y)
        for i in _local_minima(g):
            extra.append(np.linspace(max(y[i] - half, 0.0), min(y[i] + half, y_max), REFINE_POINTS))
    if extra:
        y = np.unique(np.concatenate([y] + extra))
    return y, y_max


def _cell_weights(y: np.ndarray) -> np.ndarray:
    d = np.diff(y)
    wts = np.zeros_like(y)
    wts[:-1] += 0.5 * d
    wts[1:] += 0.5 * d
    return wts


def is_T_better(v: Weight, w: Weight, T: float, scan: ScanSpec | None = None) -> ComparisonReport:
    """Scan ``|v^(y)|^2 m <= r |w^(y)|^2`` over ``0 <= y <= y_max``.

    Both transform moduli are even in ``y`` for real weights, so the half line
    suffices.  Points where ``w^`` vanishes but ``v^`` does not are violations;
    where both vanish the point is skipped.
    """
    if not T > 0:
        raise ParameterDomainError("T must be positive")
    scan = scan or ScanSpec()
    m = _minima(w, T, "w")
    r = _minima(v, T, "v")
    thr = r / m
    y, y_max = _scan_grid(v, w, T, scan)
    V = abs_sq(v, y)
    W = abs_sq(w, y)
    v0, w0 = float(abs_sq(v, 0.0)), float(abs_sq(w, 0.0))
    both_zero = (V <= ZERO_RTOL * v0) & (W <= ZERO_RTOL * w0)
    lhs, rhs = V * m, W * r
    viol = (lhs - rhs > VIOLATION_RTOL * np.maximum(lhs, rhs)) & ~both_zero
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(W > 0, V / W, np.inf)
    ratio[both_zero] = np.nan
    wts = _cell_weights(y)
    frac = float(np.sum(wts[viol]) / y_max) if y_max > 0 else 0.0
    in_band = bool(np.any(viol & (y <= T)))
    if not np.any(viol):
        verdict = "T_better"
    elif in_band:
        verdict = "not_T_better"
    else:
        verdict = "almost_T_better"
    try:
        gb = (w0 / m - 1.0) * v0 / r
    except ZeroDivisionError:
        gb = math.inf
    return ComparisonReport(v.label(), w.label(), float(T), m, r, thr, y, ratio, viol, frac,
                            in_band, verdict, gb, float(y_max), [float(t) for t in y[viol]])


def refines(v: Weight, w: Weight, T: float, mean_square_v: float, mean_square_w: float) -> bool:
    """``(1/r) int |sum s v|^2 <= (1/m) int |sum s w|^2`` for given smoothed
    mean squares; the end-to-end form of "T-better gives a sharper bound"."""
    m = _minima(w, T, "w")
    r = _minima(v, T, "v")
    return mean_square_v / r <= mean_square_w / m * (1.0 + 1e-9)


# --- G_theta ----------------------------------------------------------------

def g_theta(theta: float, x):
    """``G_theta(x) = tan^2(pi theta x) / (2 pi theta x)^2``; ``1/4`` at ``x = 0``
    and ``+inf`` at the poles ``x = (2k+1) / (2 theta)``."""
    th = abs(float(theta))
    if th == 0.0 or th >= 1.0:
        raise ParameterDomainError(f"theta must satisfy 0 < |theta| < 1, got {theta}")
    xa = np.abs(np.asarray(x, dtype=float))
    a = np.pi * th * xa
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(xa == 0.0, 0.25, np.tan(a) ** 2 / (2.0 * a) ** 2)
    u = 2.0 * th * xa  # odd integer at a pole
    k = np.round((u - 1.0) / 2.0)
    pole = np.abs(u - (2.0 * k + 1.0)) <= 4.0 * np.finfo(float).eps * np.maximum(u, 1.0)
    out = np.where(pole, np.inf, out)
    return out if out.ndim else float(out)


def g_theta_transform(theta: float, x, T: float = 1.0):
    """The same quotient through the closed-form transforms of ``C_delta`` and
    ``1_delta`` with ``delta = theta / T``."""
    d = theta / T
    y = np.asarray(x, dtype=float) * T
    return abs_sq(cesaro(1, d), y) / abs_sq(unit_interval(d), y)


@dataclass(frozen=True)
class PropertyReport:
    results: dict

    @property
    def passed(self) -> bool:
        return all(self.results.values())

    def rows(self):
        return [(k, bool(v)) for k, v in self.results.items()]


def g_theta_properties(thetas=(0.1, 0.25, 0.4), x_grid=None) -> PropertyReport:
    """Checks properties (1)-(7) of ``G_theta`` on the given grids."""
    if x_grid is None:
        x_grid = np.linspace(-5.0, 5.0, 2001)
    x = np.asarray(x_grid, dtype=float)
    res = {}
    even = True
    for th in thetas:
        even &= bool(np.array_equal(g_theta(th, x), g_theta(th, -x), equal_nan=True))
        even &= bool(np.array_equal(g_theta(th, x), g_theta(-th, x), equal_nan=True))
    res["1_even"] = even

    xs = np.linspace(1e-4, 1.0, 2000)
    res["2_increasing_on_(0,1]"] = all(bool(np.all(np.diff(g_theta(th, xs)) > 0)) for th in thetas)
    res["3_limit_at_0"] = all(abs(g_theta(th, 1e-6) - 0.25) < 1e-6 for th in thetas)
    ths = np.linspace(0.005, 0.495, 99)
    g1 = np.array([g_theta(t, 1.0) for t in ths])
    res["4_G(1)_increasing_in_theta"] = bool(np.all(np.diff(g1) > 0))
    res["5_theta_limits"] = (abs(g_theta(1e-4, 1.0) - 0.25) < 1e-6
                             and g_theta(0.5 - 1e-6, 1.0) > 1e6)

    zeros_ok = True
    xmax = float(np.max(np.abs(x)))
    for th in thetas:
        kmax = int(math.floor(xmax * th))
        for k in range(1, kmax + 1):
            for s in (1, -1):
                z = s * k / th
                zeros_ok &= bool(g_theta(th, z) < 1e-12)
                # bracketed: positive just either side
                zeros_ok &= bool(g_theta(th, z - 1e-3) > 0 and g_theta(th, z + 1e-3) > 0)
        g = g_theta(th, x)
        near_zero = np.zeros(x.shape, dtype=bool)
        for k in range(1, kmax + 1):
            near_zero |= np.abs(np.abs(x) - k / th) < 1e-9
        zeros_ok &= bool(np.all(g[~near_zero] > 0))
    res["6_zeros_at_k/theta"] = zeros_ok

    poles_ok = True
    for th in thetas:
        k = 0
        while (2 * k + 1) / (2 * th) <= xmax + 1e-12:
            p = (2 * k + 1) / (2 * th)
            for s in (1, -1):
                poles_ok &= bool(g_theta(th, s * p - 5e-7) > 1e6 and g_theta(th, s * p + 5e-7) > 1e6)
            poles_ok &= bool(np.isinf(g_theta(th, p)))
            k += 1
    res["7_poles"] = poles_ok
    return PropertyReport(res)


def cesaro_ratio(j: int, theta: float, x):
    """``|C^(j+1)^(y)|^2 / |C^(j)^(y)|^2 = G_theta(x)^(2^j)`` with
    ``theta = delta T / 2^j`` and ``x = y / T``."""
    if j < 0:
        raise ParameterDomainError("j must be nonnegative")
    return np.power(g_theta(theta, x), 2 ** j)


def cesaro_ratio_transform(j: int, delta: float, y):
    return abs_sq(cesaro(j + 1, delta), y) / abs_sq(cesaro(j, delta), y)


# --- Lanczos ------------------------------------------------------------------

@dataclass
class LanczosComparison:
    vs_unit: ComparisonReport      # L vs 1_delta
    cesaro_vs: ComparisonReport    # C_delta vs L
    tangent_max_rel: float

    def __iter__(self):
        yield self.vs_unit
        yield self.cesaro_vs


def lanczos_tangent_form(delta: float, Delta: float, y):
    """``|1^(y)|^2 / |L^(y)|^2 = (D pi y / tan((2d - D) pi y) + D pi y / tan(D pi y))^2``."""
    y = np.asarray(y, dtype=float)
    a = Delta * np.pi * y
    return (a / np.tan((2.0 * delta - Delta) * np.pi * y) + a / np.tan(a)) ** 2


def lanczos_comparison(delta: float, Delta: float, T: float,
                       scan: ScanSpec | None = None) -> LanczosComparison:
    if not (T > 0 and 0.0 < Delta <= delta and delta * T < 0.5):
        raise ParameterDomainError("need 0 < Delta T <= delta T < 1/2")
    L = lanczos(delta, Delta)
    one = unit_interval(delta)
    C = cesaro(1, delta)
    first = is_T_better(L, one, T, scan)
    second = is_T_better(C, L, T, scan)
    ys = np.linspace(1e-3, 4.0, 997) / delta
    q = abs_sq(one, ys) / abs_sq(L, ys)
    tf = lanczos_tangent_form(delta, Delta, ys)
    # away from zeros of either transform, where the quotient is 0/0-like
    ok = (np.isfinite(q) & np.isfinite(tf)
          & (np.abs(transform(L, ys)) > 1e-6 * (2 * delta - Delta))
          & (np.abs(transform(one, ys)) > 1e-6 * 2 * delta))
    rel = np.abs(q[ok] - tf[ok]) / np.maximum(np.abs(q[ok]), 1e-300)
    return LanczosComparison(first, second, float(np.max(rel)) if rel.size else 0.0)


def violation_sweep(v_factory, w_factory, T: float, thetas, scan: ScanSpec | None = None):
    """Violation fractions of ``v`` against ``w`` along ``delta = theta / T``."""
    out = []
    for th in thetas:
        d = th / T
        rep = is_T_better(v_factory(d), w_factory(d), T, scan)
        out.append((float(th), rep.violation_fraction, rep.verdict))
    return out
