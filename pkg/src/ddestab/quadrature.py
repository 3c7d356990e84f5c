"""Small adaptive Simpson quadrature.

Used as the slow reference route when integrating envelope functions; the
closed forms elsewhere are the fast path, and tests cross-check the two.
Recursion depth is generous because the integrands here are smooth rational
functions without interior singularities.
"""

from __future__ import annotations

from typing import Callable


def _simpson(f: Callable[[float], float], a: float, fa: float, b: float, fb: float) -> tuple[float, float, float]:
    m = 0.5 * (a + b)
    fm = f(m)
    s = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    return m, fm, s


def _adaptive(
    f: Callable[[float], float],
    a: float,
    fa: float,
    b: float,
    fb: float,
    m: float,
    fm: float,
    whole: float,
    tol: float,
    depth: int,
) -> float:
    lm, flm, left = _simpson(f, a, fa, m, fm)
    rm, frm, right = _simpson(f, m, fm, b, fb)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    half = 0.5 * tol
    return _adaptive(f, a, fa, m, fm, lm, flm, left, half, depth - 1) + _adaptive(
        f, m, fm, b, fb, rm, frm, right, half, depth - 1
    )


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, tol: float = 1e-12) -> float:
    """Integrate f over [a, b] to roughly the requested absolute tolerance."""
    if a == b:
        return 0.0
    fa, fb = f(a), f(b)
    m, fm, whole = _simpson(f, a, fa, b, fb)
    return _adaptive(f, a, fa, b, fb, m, fm, whole, tol, 48)
