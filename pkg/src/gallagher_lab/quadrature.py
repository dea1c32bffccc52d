"""Adaptive Simpson quadrature with forced nodes."""

from __future__ import annotations

from typing import Callable, Iterable


def _simpson(fa, fm, fb, a, b):
    return (b - a) * (fa + 4.0 * fm + fb) / 6.0


def _asr(f, a, b, fa, fm, fb, whole, tol, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = _simpson(fa, flm, fm, a, m)
    right = _simpson(fm, frm, fb, m, b)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return (_asr(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + _asr(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1))


def adaptive_simpson(f: Callable[[float], float], a: float, b: float,
                     tol: float = 1e-10, max_depth: int = 48) -> float:
    """Integral of ``f`` over ``[a, b]`` to absolute tolerance ``tol``
    (Richardson-corrected adaptive Simpson)."""
    if b == a:
        return 0.0
    fa, fb = f(a), f(b)
    fm = f(0.5 * (a + b))
    return _asr(f, a, b, fa, fm, fb, _simpson(fa, fm, fb, a, b), tol, max_depth)


def integrate_with_nodes(f: Callable[[float], float], nodes: Iterable[float],
                         tol: float = 1e-10, panels: int = 1) -> float:
    """Adaptive Simpson over consecutive forced nodes (kinks of ``f``).

    ``panels`` splits each node interval into that many equal panels before
    adaptation; doubling it is the grid-density convergence check.
    """
    pts = sorted(set(float(x) for x in nodes))
    if len(pts) < 2:
        return 0.0
    span = pts[-1] - pts[0]
    total = 0.0
    for a, b in zip(pts[:-1], pts[1:]):
        h = (b - a) / panels
        for k in range(panels):
            lo, hi = a + k * h, (a + (k + 1) * h if k < panels - 1 else b)
            total += adaptive_simpson(f, lo, hi, tol * (hi - lo) / span)
    return total
