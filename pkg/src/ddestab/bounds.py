"""Rational feedback envelopes and the bound functions built on them.

The envelope is r(x) = a*x/(1 + b*x) with a < 0, b >= 0 (strictly decreasing
on its domain, r(0) = 0).  From r we build the comparison functions used in
the stability argument:

    A(x) = x + r(x) - P(x)/r(x)          P(x) = integral of r from 0 to x
    B(x) = -P(-r(x))/r(x)
    D(x) = A(x) where r(x) < -x, else B(x)        (x >= 0 only)
    R(x) = c^2 x / (c - (d/2) x)         c = A'(0), d = A''(0)

plus the composed one-step maps lambda(M) = r(r(-r(M)/2)) and R(R(M)) used to
contract limsup/liminf estimates toward 0.

Everything here is scalar and pure.  Closed forms are hand-derived per b-case
and cross-checked against quadrature in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import NoCrossingError, PoleDomainError
from .quadrature import adaptive_simpson

# below this |x| the 0/0 forms A(x), B(x) switch to first-order Taylor values
XTAYLOR = 1e-6

# below this |b*x| the antiderivative b*x - log1p(b*x) loses digits; use series
_SERIES_CUT = 1e-3

QUAD_TOL = 1e-12


@dataclass(frozen=True)
class RationalBound:
    """Envelope parameters a < 0, b >= 0 plus derived constants."""

    a: float
    b: float

    def __post_init__(self):
        if not (self.a < 0.0):
            raise ValueError(f"envelope slope a={self.a!r} must be negative")
        if not (self.b >= 0.0):
            raise ValueError(f"envelope curvature b={self.b!r} must be nonnegative")

    @property
    def domain_low(self) -> float:
        return -1.0 / self.b if self.b > 0.0 else -math.inf

    @property
    def a_prime0(self) -> float:
        """A'(0) = a + 1/2."""
        return self.a + 0.5

    @property
    def a_second0(self) -> float:
        """A''(0) = -b*(2a + 1/3); reduces to -(2a + 1/3) at b=1."""
        return -self.b * (2.0 * self.a + 1.0 / 3.0)

    @property
    def b_prime0(self) -> float:
        """B'(0) = -a^2/2."""
        return -0.5 * self.a * self.a

    @property
    def nu(self) -> float:
        """Pole location of R: nu = 2A'(0)/A''(0); -inf when A''(0)=0."""
        d = self.a_second0
        if d == 0.0:
            return -math.inf
        return 2.0 * self.a_prime0 / d


def eval_r(bound: RationalBound, x: float) -> float:
    """The envelope r(x) = ax/(1+bx); domain error at/past the pole."""
    q = 1.0 + bound.b * x
    if q <= 0.0:
        raise PoleDomainError(bound.domain_low, x)
    return bound.a * x / q


def _P_closed(bound: RationalBound, x: float) -> float:
    # P(x) = int_0^x r(t) dt
    #   b=0:  a x^2 / 2
    #   b>0:  (a/b^2) * (u - log(1+u)),  u = b x
    a, b = bound.a, bound.b
    if b == 0.0:
        return 0.5 * a * x * x
    u = b * x
    if u <= -1.0:
        raise PoleDomainError(bound.domain_low, x, what="integration endpoint")
    if abs(u) < _SERIES_CUT:
        # u - log1p(u) = u^2 (1/2 - u/3 + u^2/4 - u^3/5 + u^4/6 - u^5/7 + ...)
        s = 1.0 / 2.0 - u * (1.0 / 3.0 - u * (1.0 / 4.0 - u * (1.0 / 5.0 - u * (1.0 / 6.0 - u / 7.0))))
        core = u * u * s
    else:
        core = u - math.log1p(u)
    return a / (b * b) * core


def _P(bound: RationalBound, x: float, method: str) -> float:
    if method == "closed":
        return _P_closed(bound, x)
    if method == "quad":
        if bound.b > 0.0 and x <= bound.domain_low:
            raise PoleDomainError(bound.domain_low, x, what="integration endpoint")
        return adaptive_simpson(lambda t: eval_r(bound, t), 0.0, x, tol=QUAD_TOL)
    raise ValueError(f"unknown method {method!r}")


def eval_A(bound: RationalBound, x: float, method: str = "closed") -> float:
    """A(x) = x + r(x) - P(x)/r(x), extended by A(0)=0.

    method="quad" integrates r numerically instead of using the closed form;
    the two routes exist to cross-check each other.
    """
    if abs(x) < XTAYLOR:
        return bound.a_prime0 * x + 0.0  # +0.0 normalizes -0.0 at x=0
    r = eval_r(bound, x)
    return x + r - _P(bound, x, method) / r


def eval_B(bound: RationalBound, x: float, method: str = "closed") -> float:
    """B(x) = -P(-r(x))/r(x), extended by B(0)=0.

    For x < 0 the inner limit -r(x) can leave the domain; that raises.
    """
    if abs(x) < XTAYLOR:
        return bound.b_prime0 * x + 0.0
    r = eval_r(bound, x)
    inner = -r
    if bound.b > 0.0 and inner <= bound.domain_low:
        raise PoleDomainError(bound.domain_low, inner, what="inner integration limit")
    return -_P(bound, inner, method) / r


def d_branch(bound: RationalBound, x: float) -> str:
    """Which branch D takes at x >= 0: "A" where r(x) < -x, else "B"."""
    if x < 0.0:
        raise ValueError(f"D is defined for x >= 0 only, got {x!r}")
    return "A" if eval_r(bound, x) < -x else "B"


def eval_D(bound: RationalBound, x: float, method: str = "closed") -> float:
    """Piecewise lower-bound map on x >= 0; continuous since A(x2)=B(x2)."""
    if d_branch(bound, x) == "A":
        return eval_A(bound, x, method)
    return eval_B(bound, x, method)


def eval_R(bound: RationalBound, x: float) -> float:
    """R(x) = c^2 x/(c - (d/2)x) with c=A'(0), d=A''(0); pole at nu."""
    if x == 0.0:
        return 0.0
    c = bound.a_prime0
    d = bound.a_second0
    if d != 0.0 and x <= bound.nu:
        raise PoleDomainError(bound.nu, x)
    return c * c * x / (c - 0.5 * d * x)


def eval_RR(bound: RationalBound, x: float) -> float:
    """R(R(x)) in one closed Moebius step: c^2 x / (1 + e(1+c)x), e=-d/(2c).

    Composing eval_R twice loses the exact identity R(R(x)) = x at a=-1.5
    (where c=-1); the single-step form keeps it bitwise.
    """
    c = bound.a_prime0
    if c == 0.0:
        return 0.0
    e = -bound.a_second0 / (2.0 * c)
    q = 1.0 + e * (1.0 + c) * x
    if q <= 0.0:
        raise PoleDomainError(-1.0 / (e * (1.0 + c)), x)
    return c * c * x / q


def solve_x2(bound: RationalBound) -> float:
    """The positive crossing r(x2) = -x2, i.e. x2 = -(1+a)/b.

    Exists only for a < -1, b > 0; elsewhere raises NoCrossingError.
    """
    if bound.a >= -1.0 or bound.b == 0.0:
        raise NoCrossingError(bound.a, bound.b)
    return -(1.0 + bound.a) / bound.b


def eval_lambda_map(bound: RationalBound, M: float) -> float:
    """One limsup-contraction step lambda(M) = r(r(-r(M)/2)), M >= 0.

    Inside the removable-singularity ball the map is pinned to its fixed
    point 0, matching the Taylor policy used for A and B there.
    """
    if M < 0.0:
        raise ValueError(f"lambda map takes M >= 0, got {M!r}")
    if M < XTAYLOR:
        return 0.0
    return eval_r(bound, eval_r(bound, -0.5 * eval_r(bound, M)))


# --------------------------------------------------------------------------
# tabulation

R_HYPOTHESIS_NOTE = "R tabulated outside its intended range a < -1; plotting only, not verdict input"


@dataclass(frozen=True)
class BoundRow:
    x: float
    A: Optional[float]
    B: Optional[float]
    D: Optional[float]
    R: Optional[float]
    branch: str
    reason: str


@dataclass(frozen=True)
class BoundTable:
    """Grid evaluation of A, B, D, R for one bound, CSV-serializable."""

    bound: RationalBound
    rows: tuple[BoundRow, ...]
    notes: tuple[str, ...]

    def to_csv(self, include_reason: bool = False) -> str:
        header = "x,A,B,D,R,branch"
        if include_reason:
            header += ",reason"
        lines = [header]
        for row in self.rows:
            cells = [repr(row.x)]
            for v in (row.A, row.B, row.D, row.R):
                cells.append("" if v is None else repr(v))
            cells.append(row.branch)
            if include_reason:
                cells.append(row.reason)
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


def derived_constants(bound: RationalBound) -> dict:
    """The footer block reported next to a table: A'(0), A''(0), nu, x2."""
    out = {
        "a": bound.a,
        "b": bound.b,
        "A_prime0": bound.a_prime0,
        "A_second0": bound.a_second0,
        "B_prime0": bound.b_prime0,
        "nu": bound.nu if math.isfinite(bound.nu) else None,
        "x2": None,
        "x2_reason": "",
    }
    try:
        out["x2"] = solve_x2(bound)
    except NoCrossingError:
        out["x2_reason"] = "no-crossing"
    return out


def build_bound_table(bound: RationalBound, xs) -> BoundTable:
    """Evaluate all four functions on the given grid, empty cells past poles.

    Rows are sorted by x.  R cells are empty exactly where x <= nu; D and the
    branch label are empty for x < 0.
    """
    rows = []
    for x in sorted(float(v) for v in xs):
        reasons = []
        if bound.b > 0.0 and x <= bound.domain_low:
            rows.append(BoundRow(x, None, None, None, None, "", f"x past pole at {bound.domain_low!r}"))
            continue
        A = eval_A(bound, x)
        try:
            B = eval_B(bound, x)
        except PoleDomainError:
            B = None
            reasons.append("B inner limit past pole")
        if x >= 0.0:
            branch = d_branch(bound, x)
            D = A if branch == "A" else B
            if D is None:
                reasons.append("D follows B")
        else:
            branch = ""
            D = None
            reasons.append("D defined for x >= 0")
        try:
            R = eval_R(bound, x)
        except PoleDomainError:
            R = None
            reasons.append("x <= nu")
        rows.append(BoundRow(x, A, B, D, R, branch, "; ".join(reasons)))
    notes = () if bound.a < -1.0 else (R_HYPOTHESIS_NOTE,)
    return BoundTable(bound, tuple(rows), notes)
