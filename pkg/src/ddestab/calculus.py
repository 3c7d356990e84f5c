"""Scalar maps with three derivatives, Schwarz derivative, envelope fitting.

A SmoothScalarMap bundles f, f', f'', f''' either analytically (catalog
maps) or by finite differences (arbitrary callables).  On top of that sit
the geometric checks used by the stability criterion: the Schwarz
derivative, the rational-envelope fit b = -f''(0)/(2 f'(0)), the envelope
sandwich check, and the sign/critical-point/Schwarzian condition battery.

Grid checks return ConditionReports: violations are data with re-checkable
witnesses, never exceptions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .bounds import RationalBound, eval_r
from .errors import CriticalPointError, NegativeFeedbackError, PoleDomainError

SCHWARZ_GUARD = 1e-12
_B_SNAP = 1e-9      # |b| below this is finite-difference noise around b = 0
_WITNESS_CAP = 25


@dataclass(frozen=True)
class SmoothScalarMap:
    f: Callable[[float], float]
    deriv1: Callable[[float], float]
    deriv2: Callable[[float], float]
    deriv3: Callable[[float], float]
    domain_low: float = -math.inf
    label: str = ""

    def __call__(self, x: float) -> float:
        return self.f(x)


def smooth_map_from_callable(f: Callable[[float], float],
                             domain_low: float = -math.inf,
                             label: str = "") -> SmoothScalarMap:
    """Wrap a bare callable with central-difference derivatives.

    Steps: h = 1e-5*max(1,|x|) for f' and f'', 1e-3*max(1,|x|) for f'''
    (third differences amplify rounding, so the step is larger).
    """

    def d1(x):
        h = 1e-5 * max(1.0, abs(x))
        return (f(x + h) - f(x - h)) / (2.0 * h)

    def d2(x):
        h = 1e-5 * max(1.0, abs(x))
        return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h)

    def d3(x):
        h = 1e-3 * max(1.0, abs(x))
        return (f(x + 2.0 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2.0 * h)) / (2.0 * h ** 3)

    return SmoothScalarMap(f, d1, d2, d3, domain_low, label or "callable")


# ---- catalog maps (analytic derivatives)

def wright_map(p: float) -> SmoothScalarMap:
    """f(x) = p(e^neg x - 1), the unit-delay negative-feedback exponential."""
    if p <= 0.0:
        raise ValueError(f"p={p!r} must be positive")
    return SmoothScalarMap(
        lambda x: p * math.expm1(-x),
        lambda x: -p * math.exp(-x),
        lambda x: p * math.exp(-x),
        lambda x: -p * math.exp(-x),
        -math.inf,
        f"wright(p={p})",
    )


def linear_map(a: float) -> SmoothScalarMap:
    return SmoothScalarMap(
        lambda x: a * x,
        lambda x: a,
        lambda x: 0.0,
        lambda x: 0.0,
        -math.inf,
        f"linear(a={a})",
    )


def mobius_map(a: float, b: float) -> SmoothScalarMap:
    """The envelope r(x) = ax/(1+bx) itself as a smooth map."""
    dl = -1.0 / b if b > 0.0 else -math.inf

    def _q(x):
        q = 1.0 + b * x
        if q <= 0.0:
            raise PoleDomainError(dl, x)
        return q

    return SmoothScalarMap(
        lambda x: a * x / _q(x),
        lambda x: a / _q(x) ** 2,
        lambda x: -2.0 * a * b / _q(x) ** 3,
        lambda x: 6.0 * a * b * b / _q(x) ** 4,
        dl,
        f"mobius(a={a}, b={b})",
    )


def compose_maps(outer: SmoothScalarMap, inner: SmoothScalarMap,
                 domain_low: Optional[float] = None, label: str = "") -> SmoothScalarMap:
    """outer(inner(x)) with chain-rule derivatives up to order three."""

    def f(x):
        return outer.f(inner.f(x))

    def d1(x):
        return outer.deriv1(inner.f(x)) * inner.deriv1(x)

    def d2(x):
        u = inner.f(x)
        u1 = inner.deriv1(x)
        return outer.deriv2(u) * u1 * u1 + outer.deriv1(u) * inner.deriv2(x)

    def d3(x):
        u = inner.f(x)
        u1 = inner.deriv1(x)
        u2 = inner.deriv2(x)
        return (outer.deriv3(u) * u1 ** 3
                + 3.0 * outer.deriv2(u) * u1 * u2
                + outer.deriv1(u) * inner.deriv3(x))

    dl = inner.domain_low if domain_low is None else domain_low
    return SmoothScalarMap(f, d1, d2, d3, dl, label or f"{outer.label}o{inner.label}")


def compose_with_expm1(m: SmoothScalarMap, label: str = "") -> SmoothScalarMap:
    """v(x) = m(e^x - 1), the map induced by the logarithmic substitution."""
    expm1 = SmoothScalarMap(math.expm1, math.exp, math.exp, math.exp, -math.inf, "expm1")
    if m.domain_low <= -1.0:
        dl = -math.inf
    else:
        dl = math.log1p(m.domain_low)
    return compose_maps(m, expm1, dl, label or f"{m.label}(e^x-1)")


def food_limited_feedback(l: float, nu0: float) -> SmoothScalarMap:
    """rt(x) = (1 - (1+x)^l) / (1 + nu0 (1+x)^l) on x > -1.

    The equilibrium-shifted feedback of the food-limited family; its fit
    gives a = -l/(1+nu0).
    """
    if l <= 0.0:
        raise ValueError(f"l={l!r} must be positive")
    if nu0 < 0.0:
        raise ValueError(f"nu0={nu0!r} must be nonnegative")

    g = SmoothScalarMap(
        lambda u: (1.0 - u) / (1.0 + nu0 * u),
        lambda u: -(1.0 + nu0) / (1.0 + nu0 * u) ** 2,
        lambda u: 2.0 * nu0 * (1.0 + nu0) / (1.0 + nu0 * u) ** 3,
        lambda u: -6.0 * nu0 * nu0 * (1.0 + nu0) / (1.0 + nu0 * u) ** 4,
        -math.inf,
        "g",
    )
    power = SmoothScalarMap(
        lambda x: (1.0 + x) ** l,
        lambda x: l * (1.0 + x) ** (l - 1.0),
        lambda x: l * (l - 1.0) * (1.0 + x) ** (l - 2.0),
        lambda x: l * (l - 1.0) * (l - 2.0) * (1.0 + x) ** (l - 3.0),
        -1.0,
        f"(1+x)^{l}",
    )
    return compose_maps(g, power, -1.0, f"food_limited(l={l}, nu0={nu0})")


def reflect_map(m: SmoothScalarMap) -> SmoothScalarMap:
    """g(x) = -m(-x): the sign change that flips a negative curvature fit."""
    return SmoothScalarMap(
        lambda x: -m.f(-x),
        lambda x: m.deriv1(-x),
        lambda x: -m.deriv2(-x),
        lambda x: m.deriv3(-x),
        -math.inf,
        f"reflect({m.label})",
    )


def scale_map(m: SmoothScalarMap, c: float) -> SmoothScalarMap:
    return SmoothScalarMap(
        lambda x: c * m.f(x),
        lambda x: c * m.deriv1(x),
        lambda x: c * m.deriv2(x),
        lambda x: c * m.deriv3(x),
        m.domain_low,
        f"{c}*{m.label}",
    )


# ---- Schwarz derivative and fitting

def schwarz_derivative(m: SmoothScalarMap, x: float) -> float:
    """Sf = f'''/f' - 1.5 (f''/f')^2; undefined within the f' guard."""
    d1 = m.deriv1(x)
    if abs(d1) <= SCHWARZ_GUARD:
        raise CriticalPointError(x, d1)
    ratio = m.deriv2(x) / d1
    return m.deriv3(x) / d1 - 1.5 * ratio * ratio


@dataclass(frozen=True)
class ReflectionNeeded:
    """Fit produced b < 0: refit the reflected map -f(-x) instead."""
    a: float
    raw_b: float


def fit_rational_bound(m: SmoothScalarMap):
    """Envelope parameters a = f'(0), b = -f''(0)/(2 f'(0)).

    Returns a RationalBound, or ReflectionNeeded when the curvature comes
    out negative (the caller should refit reflect_map(m)).
    """
    f0 = m.f(0.0)
    if abs(f0) > 1e-12:
        raise ValueError(f"map must fix 0, got f(0)={f0!r}")
    a = m.deriv1(0.0)
    if a >= 0.0:
        raise NegativeFeedbackError(a)
    b = -m.deriv2(0.0) / (2.0 * a)
    if abs(b) < _B_SNAP:
        b = 0.0
    if b < 0.0:
        return ReflectionNeeded(a, b)
    return RationalBound(a, b)


# ---- condition reports

@dataclass(frozen=True)
class Witness:
    where: object  # grid point, or a descriptor dict for functional checks
    lhs: float
    rhs: float


@dataclass(frozen=True)
class ConditionReport:
    condition_id: str
    holds: bool
    witnesses: tuple
    grid_size: int
    note: str = ""

    def to_json(self) -> dict:
        out = {
            "condition_id": self.condition_id,
            "holds": self.holds,
            "grid_size": self.grid_size,
            "witnesses": [{"x": w.where, "lhs": w.lhs, "rhs": w.rhs} for w in self.witnesses],
        }
        if self.note:
            out["note"] = self.note
        return out


def check_envelope(m: SmoothScalarMap, bound: RationalBound,
                   x_max: float, n: int) -> ConditionReport:
    """Sandwich check: r >= f on the negative side, r <= f on (0, x_max].

    Pure equality across the whole grid is reported as degenerate-equal in
    the note, not as a failure.
    """
    if n < 2:
        raise ValueError("need at least 2 grid points per side")
    lo = max(m.domain_low, bound.domain_low)
    if math.isinf(lo):
        lo_eff = -x_max
    else:
        lo_eff = lo * (1.0 - 1e-9)  # just inside the pole
    neg = [lo_eff * (j + 0.5) / n for j in range(n)][::-1]
    pos = [x_max * (j + 1.0) / n for j in range(n)]

    witnesses = []
    equal = 0
    checked = 0
    for x in neg:
        rv = eval_r(bound, x)
        fv = m.f(x)
        checked += 1
        if rv == fv:
            equal += 1
        elif rv < fv and len(witnesses) < _WITNESS_CAP:
            witnesses.append(Witness(x, rv, fv))
    for x in pos:
        rv = eval_r(bound, x)
        fv = m.f(x)
        checked += 1
        if rv == fv:
            equal += 1
        elif rv > fv and len(witnesses) < _WITNESS_CAP:
            witnesses.append(Witness(x, rv, fv))

    note = "degenerate-equal" if equal == checked else ""
    return ConditionReport("envelope", not witnesses, tuple(witnesses), checked, note)


def check_A_conditions(m: SmoothScalarMap, x_range, n: int):
    """The three admissibility checks on a grid over x_range = (lo, hi):

    A1  x*f(x) < 0 off the origin;
    A2  at most one critical point (sign changes of f') and a bounded-below
        probe, which is reported, not asserted;
    A3  Schwarz derivative negative wherever f' is outside the guard.
    """
    if n < 100:
        raise ValueError("grid too coarse for the condition battery (n >= 100)")
    lo, hi = x_range
    xs = [lo + (hi - lo) * j / (n - 1) for j in range(n)]

    # A1
    w1 = []
    for x in xs:
        if x == 0.0:
            continue
        v = x * m.f(x)
        if v >= 0.0 and len(w1) < _WITNESS_CAP:
            w1.append(Witness(x, v, 0.0))
    r1 = ConditionReport("A1", not w1, tuple(w1), n)

    # A2
    d1s = [m.deriv1(x) for x in xs]
    flips = []
    last_sign = 0
    last_x = xs[0]
    for x, d in zip(xs, d1s):
        s = (d > 0.0) - (d < 0.0)
        if s != 0:
            if last_sign != 0 and s != last_sign:
                flips.append(Witness(x, m.deriv1(last_x), d))
            last_sign = s
            last_x = x
    fmin = min(m.f(x) for x in xs)
    note2 = f"f >= {fmin!r} on grid; {len(flips)} sign change(s) of f'; boundedness beyond the grid is probed, not proven"
    r2 = ConditionReport("A2", len(flips) <= 1, tuple(flips[:_WITNESS_CAP]) if len(flips) > 1 else (), n, note2)

    # A3
    w3 = []
    skipped = 0
    for x in xs:
        if abs(m.deriv1(x)) <= SCHWARZ_GUARD:
            skipped += 1
            continue
        s = schwarz_derivative(m, x)
        if s >= 0.0 and len(w3) < _WITNESS_CAP:
            w3.append(Witness(x, s, 0.0))
    note3 = f"{skipped} point(s) skipped inside the f' guard" if skipped else ""
    r3 = ConditionReport("A3", not w3, tuple(w3), n, note3)

    return [r1, r2, r3]
