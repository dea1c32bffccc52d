"""The acceptance battery: ten criteria, each returning a pass/fail line.

``profile="quick"`` runs the stated sizes; ``profile="full"`` doubles every
grid, sweep and instance count.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import oracles
from .arith import balanced_part, divisor_table, divisor_values, fit_log_polynomial
from .compare import g_theta_properties, is_T_better, ScanSpec
from .dirichlet import CriticalLineSpec, DirichletPoly, corollary_check, theorem1_sweep
from .expsum import (cesaro_constant, norm_sq_2T, random_spec, smoothed_mean_square,
                     verify_lemma, window_integral)
from .selberg import (bruteforce_selberg, dft_identity_check, length_inertia_check,
                      modified_selberg_integral, proposition1_check, selberg_integral,
                      weighted_selberg_integral)
from .transforms import closed_form, generic_transform, min_sq_on_interval
from .weights import (PiecewisePolynomial, cesaro, convolve, custom, lanczos, unit_interval, unit_step,
                      _triangle)

LEMMA_RTOL = 1e-9
ORACLE_RTOL = 1e-8
TRANSFORM_RTOL = 1e-9
# transform comparisons skip frequencies where |w^| < this fraction of w^(0)
TRANSFORM_FLOOR = 1e-6
SPLINE_ATOL = 1e-12
CONSTANT_RTOL = 1e-10
SELBERG_FLOAT_RTOL = 1e-12
DFT_RTOL = 1e-9
DFT_BAND = 1.0
TREND_SLOPE = 0.01
FIT_RTOL = 0.01


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number:2d} [{tag}] {self.name}: {self.detail} ({self.seconds:.1f}s)"


def _scale(profile: str) -> int:
    if profile not in ("quick", "full"):
        raise ValueError(f"unknown profile {profile!r}")
    return 1 if profile == "quick" else 2


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


# --- 1 ------------------------------------------------------------------------

def lemma_battery(profile: str = "quick", seed: int = 0):
    """(stars) on 50 specs x 4 families x 5 values of T."""
    s = _scale(profile)
    rng = np.random.default_rng(seed)
    Ts = (0.5, 1.0, 2.0, 5.0, 10.0)
    cases = violations = 0
    worst = -math.inf
    for _ in range(50 * s):
        spec = random_spec(rng, int(rng.integers(1, 31)))
        for T in Ts:
            theta = float(rng.uniform(0.05, 0.95))
            d = theta / T
            fams = (unit_interval(d), unit_step(d), cesaro(int(rng.integers(1, 4)), d),
                    lanczos(d, float(rng.uniform(0.1, 1.0)) * d))
            for w in fams:
                rep = verify_lemma(spec, w, T)
                cases += 1
                worst = max(worst, -rep.slack / max(rep.rhs, 1e-300))
                violations += not rep.holds
    return violations == 0, f"{cases} cases, {violations} violations, worst relative excess {worst:.2e}"


# --- 2 ------------------------------------------------------------------------

def exact_vs_oracle(profile: str = "quick", seed: int = 0):
    s = _scale(profile)
    rng = np.random.default_rng(seed + 1)
    worst = [0.0, 0.0, 0.0]
    n_inst = 20 * s
    weights = [unit_interval(0.3), cesaro(2, 0.7), lanczos(1.0, 0.4), unit_step(0.5), cesaro(3, 1.1)]
    for i in range(n_inst):
        spec = random_spec(rng, int(rng.integers(1, 25)))
        T = float(rng.choice([0.5, 1.0, 2.0, 5.0, 10.0]))
        worst[0] = max(worst[0], _rel(norm_sq_2T(spec, T), oracles.norm_sq_2T_quadrature(spec, T)))
        w = weights[i % len(weights)]
        worst[1] = max(worst[1], _rel(smoothed_mean_square(spec, w),
                                      oracles.smoothed_mean_square_quadrature(spec, w)))
        d = float(rng.uniform(0.1, 5.0))
        worst[2] = max(worst[2], _rel(window_integral(spec, d),
                                      oracles.window_integral_bruteforce(spec, d)))
    ok = max(worst) <= ORACLE_RTOL
    return ok, (f"{n_inst} instances each; worst rel err norm {worst[0]:.1e}, "
                f"smoothed {worst[1]:.1e}, window {worst[2]:.1e}")


# --- 3 ------------------------------------------------------------------------

def transform_crossvalidation(profile: str = "quick", seed: int = 0):
    s = _scale(profile)
    rng = np.random.default_rng(seed + 2)
    weights = [unit_interval(0.7), lanczos(1.3, 0.4)] + [cesaro(j, 1.1) for j in range(0, 6)]
    worst, compared = 0.0, 0
    for w in weights:
        ys = rng.uniform(-6.0, 6.0, 200 * s) / w.delta
        cf = np.asarray(closed_form(w, ys))
        gt = np.asarray(generic_transform(w.spline, ys))
        keep = np.abs(cf) >= TRANSFORM_FLOOR * abs(float(closed_form(w, 0.0)))
        if np.any(keep):
            worst = max(worst, float(np.max(np.abs(gt[keep] - cf[keep]) / np.abs(cf[keep]))))
        compared += int(np.sum(keep))
    # the convolution recursion reproduces the closed-form Cesaro transform
    prop2 = 0.0
    for j in range(2, 6):
        w = cesaro(j, 1.0)
        ys = np.linspace(0.0, 2.0 ** (j - 2), 50)
        cf = np.asarray(closed_form(w, ys))
        prop2 = max(prop2, float(np.max(np.abs(generic_transform(w.spline, ys) - cf) / np.abs(cf))))
        prop2 = max(prop2, _rel(w.spline.integral(), 4.0 / 2.0 ** (2 ** j)))
    ok = worst <= TRANSFORM_RTOL and prop2 <= TRANSFORM_RTOL
    return ok, f"{compared} frequencies, worst rel err {worst:.1e}; recursion vs closed form {prop2:.1e}"


# --- 4 ------------------------------------------------------------------------

def jackson_cubic(delta: float) -> PiecewisePolynomial:
    """``(6|t|^3 - 6 delta t^2 + delta^3) / (3 delta^3)`` on ``|t| <= delta/2``,
    ``2 (delta - |t|)^3 / (3 delta^3)`` on ``delta/2 < |t| <= delta``, in the
    local basis ``(t - b_i)``."""
    d = float(delta)
    d3 = 3.0 * d ** 3
    out = []
    # [-d, -d/2]: 2 (d + t)^3 / (3 d^3), u = t + d
    out.append([0.0, 0.0, 0.0, 2.0 / d3])
    # [-d/2, 0]: (-6 t^3 - 6 d t^2 + d^3)/(3 d^3), u = t + d/2
    out.append(np.polynomial.polynomial.polyval(
        np.polynomial.Polynomial([-d / 2, 1.0]), [d ** 3, 0.0, -6 * d, -6.0]).coef / d3)
    # [0, d/2]: (6 t^3 - 6 d t^2 + d^3)/(3 d^3), u = t
    out.append(np.array([d ** 3, 0.0, -6 * d, 6.0]) / d3)
    # [d/2, d]: 2 (d - t)^3 / (3 d^3), u = t - d/2
    out.append(np.polynomial.polynomial.polyval(
        np.polynomial.Polynomial([d / 2, 1.0]), [2 * d ** 3, -6 * d ** 2, 6 * d, -2.0]).coef / d3)
    rows = [np.pad(np.asarray(r, dtype=float), (0, 4 - len(r))) for r in out]
    return PiecewisePolynomial(np.array([-d, -d / 2, 0.0, d / 2, d]), np.array(rows))


def spline_identities(profile: str = "quick", seed: int = 0):
    # coefficients grow like delta^-3, so delta stays >= 0.1: below that a
    # 1e-12 absolute bound is smaller than one ulp of the largest coefficient
    worst, worst_rel = 0.0, 0.0
    deltas = (1.0, 0.5, 2.0, 0.1, 3.0) if profile == "quick" else (1.0, 0.5, 2.0, 0.1, 3.0, 0.37, 7.5, 0.15)
    for d in deltas:
        box = unit_interval(d / 2).spline
        tri_ref = _triangle(d)
        tri = convolve(box, box).scale(1.0 / d)
        c = cesaro(1, d / 2).spline
        cub_ref = jackson_cubic(d)
        cub = convolve(c, c).scale(1.0 / d)
        for got, ref in ((tri, tri_ref), (cub, cub_ref)):
            diff = got.max_coeff_diff(ref)
            worst = max(worst, diff)
            worst_rel = max(worst_rel, diff / float(np.max(np.abs(ref.coeffs))))
    return worst <= SPLINE_ATOL, (f"{len(deltas)} values of delta, worst coefficient diff {worst:.1e} "
                                  f"({worst_rel:.1e} of the largest coefficient)")


# --- 5 ------------------------------------------------------------------------

def constant_checks(profile: str = "quick", seed: int = 0):
    worst = 0.0
    thetas = (0.1, 0.25, 0.4) if profile == "quick" else (0.1, 0.25, 0.4, 0.05, 0.3, 0.45)
    for T in (1.0, 10.0):
        for th in thetas:
            d = th / T
            m1 = min_sq_on_interval(unit_interval(d), T).m
            mc = min_sq_on_interval(cesaro(1, d), T).m
            f1 = math.sin(2 * math.pi * d * T) ** 2 / (math.pi * T) ** 2
            fc = math.sin(math.pi * d * T) ** 4 / (math.pi ** 4 * T ** 4 * d ** 2)
            worst = max(worst, _rel(m1, f1), _rel(mc, fc), abs(cesaro_constant(T, th) * mc - 1.0))
            # the generic path finds the same minima
            mg = min_sq_on_interval(custom(cesaro(1, d).spline), T).m
            worst = max(worst, _rel(mg, fc))
    return worst <= CONSTANT_RTOL, f"worst rel err {worst:.1e}"


# --- 6 ------------------------------------------------------------------------

def selberg_oracles(profile: str = "quick", seed: int = 0):
    d1 = divisor_table(1, 1, 4200)
    d2 = divisor_table(2, 1, 4200)
    b2 = balanced_part(d2)
    grid = [(1, 1), (17, 7), (500, 8), (1000, 10), (2000, 50)]
    if profile == "full":
        grid += [(2000, 1), (1500, 33), (777, 50)]
    exact_ok, worst_float, checks = True, 0.0, 0
    for N, h in grid:
        tri = {k: h - abs(k) for k in range(-h + 1, h)}
        for f in (d1, d2, b2):
            p = None if f.is_balanced else f.log_poly
            vals = [
                (selberg_integral(f, N, h).value, bruteforce_selberg(f, N, h, p=p)),
                (modified_selberg_integral(f, N, h).value,
                 bruteforce_selberg(f, N, h, weights=tri, divisor=h, p=p)),
                (weighted_selberg_integral(f, unit_step(float(h)), N, require_balanced=False).value,
                 bruteforce_selberg(f, N, h)),
            ]
            for a, b in vals:
                checks += 1
                if f.is_integer:
                    exact_ok &= a == b
                else:
                    worst_float = max(worst_float, _rel(a, b) if b else abs(a))
    zero = all(selberg_integral(d1, N, h).value == 0.0 for N, h in grid)
    ok = exact_ok and worst_float <= SELBERG_FLOAT_RTOL and zero
    return ok, (f"{checks} comparisons; integer tables bit-equal={exact_ok}, "
                f"balanced d2 worst rel {worst_float:.1e}; J_d1 = 0: {zero}")


# --- 7 ------------------------------------------------------------------------

def dft_identity(profile: str = "quick", seed: int = 0):
    s = _scale(profile)
    N = 10 ** 4
    Hs = [8, 16, 32] + ([64] if s > 1 else [])
    b2 = balanced_part(divisor_table(2, 1, 2 * N + 2 * max(Hs) + 2))
    worst, band = 0.0, []
    for H in Hs:
        rep = dft_identity_check(b2, cesaro(1, float(H)), N)
        worst = max(worst, rep.identity_rel)
        band.append(rep.normalized)
        rep = dft_identity_check(b2, unit_step(float(H)), N)
        worst = max(worst, rep.identity_rel)
    ok = worst <= DFT_RTOL and max(band) <= DFT_BAND
    return ok, (f"identity worst rel {worst:.1e}; E/(H^3||f||^2) over H={Hs}: "
                + ", ".join(f"{b:.2e}" for b in band))


# --- 8 ------------------------------------------------------------------------

def g_theta_battery(profile: str = "quick", seed: int = 0):
    s = _scale(profile)
    props = g_theta_properties(x_grid=np.linspace(-5.0, 5.0, 2001 * s))
    T = 10.0
    fracs = []
    for th in (0.30, 0.40, 0.45, 0.49):
        d = th / T
        rep = is_T_better(cesaro(1, d), unit_interval(d), T, ScanSpec(n=2 ** 14 * s))
        fracs.append(rep.violation_fraction)
    decreasing = all(b < a for a, b in zip(fracs, fracs[1:]))
    failed = [k for k, v in props.results.items() if not v]
    return props.passed and decreasing, (
        f"properties {'all pass' if not failed else 'failed ' + ','.join(failed)}; "
        "violation fraction " + " > ".join(f"{f:.4f}" for f in fracs))


# --- 9 ------------------------------------------------------------------------

def _slope(params, ratios) -> float:
    return float(np.polyfit(np.log(params), np.log(ratios), 1)[0])


def ratio_sweeps(profile: str = "quick", seed: int = 0):
    s = _scale(profile)
    rng = np.random.default_rng(seed + 3)
    out = {}
    D = DirichletPoly(1, rng.normal(size=20) + 1j * rng.normal(size=20))
    Ts = [100.0 * 2 ** i for i in range(3 * s + 1)]
    out["theorem1"] = (Ts, [r.ratio for r in theorem1_sweep(D, Ts)])
    P = CriticalLineSpec(1, 200, np.ones(200), np.ones(200))
    out["corollary"] = (Ts, [corollary_check(P, T, 0.1).ratio for T in Ts])
    Ns = [10_000 * 2 ** i for i in range(3 * s + 1)]
    hs = [int(round(N ** (1 / 3))) for N in Ns]
    top = 2 * Ns[-1] + 4 * hs[-1] + 2
    d2 = divisor_table(2, 1, top)
    b2 = balanced_part(d2)
    w20 = cesaro(1, 20.0)
    out["proposition1"] = (Ns, [proposition1_check(d2, w20, N).ratio for N in Ns])
    out["theorem2"] = (Ns, [length_inertia_check(b2, N, h, 2 * h)[1].ratio for N, h in zip(Ns, hs)])
    out["length_inertia"] = (Ns, [length_inertia_check(b2, N, h, 2 * h)[0].ratio
                                  for N, h in zip(Ns, hs)])
    ok = True
    parts = []
    for name, (ps, rs) in out.items():
        finite = all(math.isfinite(r) and r > 0 for r in rs)
        slope = _slope(ps, rs) if finite else math.inf
        good = finite and slope <= TREND_SLOPE
        ok &= good
        parts.append(f"{name} slope {slope:+.3f}")
    # recorded only: for unbalanced d2 the H^3 ||f||^2 term tracks record divisor counts
    raw = [length_inertia_check(d2, N, h, 2 * h)[0].ratio for N, h in zip(Ns, hs)]
    parts.append(f"(unbalanced d2 length inertia slope {_slope(Ns, raw):+.3f}, not gated)")
    return ok, "; ".join(parts)


# --- 10 -----------------------------------------------------------------------

def divisor_gate(profile: str = "quick", seed: int = 0):
    n_max = 10 ** 4
    sieve_ok = all(np.array_equal(divisor_values(k, n_max), oracles.divisor_enumeration(k, n_max))
                   for k in (1, 2, 3))
    x_hi = 10 ** 6
    v3 = divisor_values(3, x_hi)
    fits = [fit_log_polynomial(2, 10 ** 5, x_hi), fit_log_polynomial(3, 10 ** 5, x_hi, values=v3)]
    worst = max(float(np.max(r.rel_err)) for r in fits)
    ok = sieve_ok and all(r.passed for r in fits)
    return ok, f"sieve = enumeration to 1e4: {sieve_ok}; log-polynomial fit worst rel err {worst:.1e}"


CRITERIA = [
    (1, "Lemma battery", lemma_battery),
    (2, "exact vs oracle", exact_vs_oracle),
    (3, "transform cross-validation", transform_crossvalidation),
    (4, "spline identities", spline_identities),
    (5, "constant checks", constant_checks),
    (6, "Selberg oracles", selberg_oracles),
    (7, "DFT identity", dft_identity),
    (8, "G_theta properties", g_theta_battery),
    (9, "ratio sweeps", ratio_sweeps),
    (10, "divisor gate", divisor_gate),
]


def run_criterion(number: int, profile: str = "quick", seed: int = 0) -> CriterionResult:
    num, name, fn = CRITERIA[number - 1]
    t0 = time.perf_counter()
    try:
        ok, detail = fn(profile, seed)
    except Exception as exc:  # a crash is a failure, reported as such
        ok, detail = False, f"error {type(exc).__name__}: {exc}"
    return CriterionResult(num, name, bool(ok), detail, time.perf_counter() - t0)


def run_suite(profile: str = "quick", seed: int = 0, only=None) -> list[CriterionResult]:
    nums = only or [c[0] for c in CRITERIA]
    return [run_criterion(n, profile, seed) for n in nums]
