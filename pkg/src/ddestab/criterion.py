"""Global-stability verdicts and their numerical certificates.

Three decision rules share the |a|*Lambda vs 3/2 comparison and differ in
when the inequality must be strict: the unit-delay rule (strict at b = 0),
the rescaled-time rule (strict at b = 0.5), and the food-limited rule
(strict at nu0 = 1).  Boundary comparisons are exact float comparisons with
zero tolerance on purpose: the weak/strict split at exactly 3/2 is the
content of the criterion, so callers wanting robustness pre-round inputs.

Alongside the closed-form verdicts live two numerical corroborations: a
sampled check of the feedback sandwich r(M(phi)) <= f(t,phi) <= r(-M(-phi))
on random histories, and the m-M iteration driving limsup bounds to zero
through the composed envelope maps.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .bounds import RationalBound, eval_r, eval_R, eval_RR, eval_lambda_map
from .calculus import ConditionReport, Witness
from .integrator import history_from_knots, yorke_max

GY_VIOLATION_TOL = 1e-12
_WITNESS_CAP = 25


@dataclass(frozen=True)
class Certificate:
    a: float
    b: float
    lam: float
    strict_needed: bool
    margin: float

    def to_json(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "lambda": self.lam,
            "strict_needed": self.strict_needed,
            "margin": self.margin,
        }


@dataclass(frozen=True)
class StabilityVerdict:
    status: str  # "GloballyStable" | "Inconclusive"
    theorem: Optional[str]  # "main" | "apl" | "flm" | None
    certificate: Certificate
    reason: str

    @property
    def globally_stable(self) -> bool:
        return self.status == "GloballyStable"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "theorem": self.theorem,
            "certificate": self.certificate.to_json(),
            "reason": self.reason,
        }


def decide_theorem_main(a: float, b: float) -> StabilityVerdict:
    """Unit-delay rule: stable iff b > 0 and |a| <= 3/2, or b = 0 and |a| < 3/2."""
    if not a < 0.0:
        raise ValueError(f"a={a!r} must be negative")
    if not b >= 0.0:
        raise ValueError(f"b={b!r} must be nonnegative")
    strict = b == 0.0
    value = abs(a)
    cert = Certificate(a, b, 1.0, strict, 1.5 - value)
    if value < 1.5 or (value == 1.5 and not strict):
        side = "b > 0, weak inequality suffices" if b > 0.0 else "b = 0, strict inequality held"
        return StabilityVerdict("GloballyStable", "main", cert, f"|a| = {value!r} vs 3/2: {side}")
    if value == 1.5:
        return StabilityVerdict(
            "Inconclusive", None, cert,
            "b = 0 at |a| = 3/2: the rule is strict there because the constant 3/2 "
            "is the best possible, so the boundary does not decide",
        )
    return StabilityVerdict("Inconclusive", None, cert, f"|a| = {value!r} exceeds 3/2")


def decide_theorem_apl(a: float, b: float, lam: float) -> StabilityVerdict:
    """Rescaled-time rule: stable iff |a|*Lambda <= 3/2, strict when b = 0.5."""
    if not a < 0.0:
        raise ValueError(f"a={a!r} must be negative")
    if not b >= 0.0:
        raise ValueError(f"b={b!r} must be nonnegative")
    if not lam > 0.0:
        raise ValueError(f"Lambda={lam!r} must be positive")
    strict = b == 0.5
    value = abs(a) * lam
    cert = Certificate(a, b, lam, strict, 1.5 - value)
    if value < 1.5 or (value == 1.5 and not strict):
        return StabilityVerdict(
            "GloballyStable", "apl", cert,
            f"|a|*Lambda = {value!r} vs 3/2 with b = {b!r}",
        )
    if value == 1.5:
        return StabilityVerdict(
            "Inconclusive", None, cert,
            "b = 0.5 makes the transformed envelope linear, so the rule is strict "
            "and the boundary value 3/2 does not decide",
        )
    return StabilityVerdict("Inconclusive", None, cert, f"|a|*Lambda = {value!r} exceeds 3/2")


def _fit_b_food(l: float, nu0: float) -> float:
    return (nu0 * (l + 1.0) - (l - 1.0)) / (2.0 * (1.0 + nu0))


def decide_food_limited(l: float, nu0: float, lam: float) -> StabilityVerdict:
    """Food-limited rule: stable iff l*Lambda/(1+nu0) <= 3/2, strict at nu0 = 1."""
    if not l > 0.0:
        raise ValueError(f"l={l!r} must be positive")
    if not nu0 >= 0.0:
        raise ValueError(f"nu0={nu0!r} must be nonnegative")
    if not lam > 0.0:
        raise ValueError(f"Lambda={lam!r} must be positive")
    a = -l / (1.0 + nu0)
    strict = nu0 == 1.0
    value = l * lam / (1.0 + nu0)
    cert = Certificate(a, _fit_b_food(l, nu0), lam, strict, 1.5 - value)
    if value < 1.5 or (value == 1.5 and not strict):
        return StabilityVerdict(
            "GloballyStable", "flm", cert,
            f"l*Lambda/(1+nu0) = {value!r} vs 3/2 with nu0 = {nu0!r}",
        )
    if value == 1.5:
        return StabilityVerdict(
            "Inconclusive", None, cert,
            "nu0 = 1 makes the fitted curvature exactly 0.5, so the rule is strict "
            "and the boundary value 3/2 does not decide",
        )
    return StabilityVerdict("Inconclusive", None, cert, f"l*Lambda/(1+nu0) = {value!r} exceeds 3/2")


def decide_for_model(model) -> StabilityVerdict:
    """Dispatch a catalog model to the applicable rule via its metadata."""
    meta = model.meta
    fallback = Certificate(meta.a or 0.0, meta.b or 0.0, meta.lambda_cap or 0.0, False, 0.0)
    if not meta.h3_holds:
        return StabilityVerdict(
            "Inconclusive", None, fallback,
            "model metadata does not assert the divergent-time-average hypothesis "
            "(h3_holds is false), so no rule applies",
        )
    family = meta.family
    if family == "wright":
        return decide_theorem_apl(meta.a, meta.b, meta.lambda_cap)
    if family == "linear_vd":
        return decide_theorem_main(meta.a, 0.0)
    if family == "logistic_vd":
        return decide_theorem_apl(meta.a, meta.b, meta.lambda_cap)
    if family in ("food_limited", "food_limited_maxima", "logistic_vd_maxima", "custom_read"):
        return decide_food_limited(meta.l_exp, meta.nu0, meta.lambda_cap)
    return StabilityVerdict(
        "Inconclusive", None, fallback,
        f"no applicable stability rule for family {family!r}",
    )


# --------------------------------------------------------------------------
# sampled feedback-sandwich verification

def verify_gy_functional(model, bound: RationalBound, n_samples: int, seed: int) -> ConditionReport:
    """Check r(M(phi)) <= f(t,phi) <= r(-M(-phi)) on random histories.

    The lower inequality is checked on every sample; the upper one only
    when min phi stays above the envelope pole, which is exactly when its
    right-hand side is defined.  Violations carry the full history as a
    re-checkable witness descriptor.
    """
    rng = random.Random(seed)
    span = model.span
    lo = max(bound.domain_low * 0.9, -5.0)
    if model.domain_low > -float("inf"):
        # population-type models need admissible (positive) sample histories
        lo = max(lo, model.domain_low + 0.1 * (model.equilibrium - model.domain_low))
    hi = 5.0
    T, T1 = model.meta.window or (0.0, 10.0 * span)

    witnesses = []
    n_upper = 0
    n_equal = 0
    for i in range(n_samples):
        t = rng.uniform(T, T1)
        knot_times = [t - span + span * j / 7.0 for j in range(8)]
        knot_values = [rng.uniform(lo, hi) for _ in range(8)]
        view = history_from_knots(knot_times, knot_values)
        fval = model.rhs(t, view)
        M = yorke_max(view, (t - span, t))
        lower = eval_r(bound, M)
        if lower == fval:
            n_equal += 1
        if lower - fval > GY_VIOLATION_TOL and len(witnesses) < _WITNESS_CAP:
            witnesses.append(Witness(
                {"sample": i, "t": t, "knot_times": knot_times,
                 "knot_values": knot_values, "side": "lower"},
                lower, fval,
            ))
        mn = view.min_over((t - span, t))
        if mn > bound.domain_low:
            n_upper += 1
            upper = eval_r(bound, min(0.0, mn))
            if fval - upper > GY_VIOLATION_TOL and len(witnesses) < _WITNESS_CAP:
                witnesses.append(Witness(
                    {"sample": i, "t": t, "knot_times": knot_times,
                     "knot_values": knot_values, "side": "upper"},
                    fval, upper,
                ))
    cid = "GY-lower"
    if witnesses and all(w.where["side"] == "upper" for w in witnesses):
        cid = "GY-upper"
    note = f"upper bound checked on {n_upper}/{n_samples} samples"
    if n_equal == n_samples:
        note += "; degenerate-equal on the lower side"
    return ConditionReport(cid, not witnesses, tuple(witnesses), n_samples, note)


def reverify_gy_witness(model, bound: RationalBound, where: dict) -> float:
    """Re-evaluate one witness descriptor; positive return = inequality
    violated by that amount (independent of the sampling loop above)."""
    view = history_from_knots(where["knot_times"], where["knot_values"])
    t = where["t"]
    span = model.span
    fval = model.rhs(t, view)
    if where["side"] == "lower":
        M = yorke_max(view, (t - span, t))
        return eval_r(bound, M) - fval
    mn = view.min_over((t - span, t))
    return fval - eval_r(bound, min(0.0, mn))


# --------------------------------------------------------------------------
# m-M iteration

@dataclass(frozen=True)
class IterationStep:
    k: int
    M: float
    m_bound: float


@dataclass(frozen=True)
class IterationTrace:
    steps: tuple
    status: str  # "converged" | "max_iter" | "non_contracting"
    map_label: str


def mM_iteration(bound: RationalBound, M0: float, max_iter: int = 2000,
                 tol: float = 1e-8) -> IterationTrace:
    """Contract a limsup bound M through the composed envelope maps.

    Route by parameters: the triple-composition map for shallow slopes, the
    one-step R-composition for steep ones, and the closed linear factors at
    b = 0.  Any step that fails to strictly decrease stops the trace with a
    non-contracting flag (at |a| = 1.5 the composed map is the identity, so
    that flag is the expected outcome there).
    """
    if not M0 > 0.0:
        raise ValueError(f"M0={M0!r} must be positive")
    a, b = bound.a, bound.b
    if b == 0.0:
        if a <= -1.0:
            factor = (a + 0.5) ** 2
            label = "linear[(a+1/2)^2]"
        else:
            factor = -a ** 3 / 2.0
            label = "linear[|a|^3/2]"

        def step_map(M):
            return factor * M

        def m_of(M):
            return a * M
    else:
        if not -1.5 <= a < 0.0:
            raise ValueError(f"iteration routes cover a in [-1.5, 0), got {a!r}")
        if a >= -1.25:
            label = "lambda"

            def step_map(M):
                return eval_lambda_map(bound, M)

            def m_of(M):
                return eval_r(bound, -0.5 * eval_r(bound, M))
        else:
            label = "RoR"

            def step_map(M):
                return eval_RR(bound, M)

            def m_of(M):
                return eval_R(bound, M)

    steps = []
    M = M0
    status = "max_iter"
    for k in range(max_iter):
        steps.append(IterationStep(k, M, m_of(M)))
        if M < tol:
            status = "converged"
            break
        M1 = step_map(M)
        if not M1 < M:
            steps.append(IterationStep(k + 1, M1, m_of(M1)))
            status = "non_contracting"
            break
        M = M1
    else:
        if M < tol:
            steps.append(IterationStep(max_iter, M, m_of(M)))
            status = "converged"
    return IterationTrace(tuple(steps), status, label)
