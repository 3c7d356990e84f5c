"""Exception types shared across the package.

All errors carry enough structure that callers (and the CLI) can render a
useful diagnostic without string-parsing the message.
"""

from __future__ import annotations


class DdestabError(Exception):
    """Base class for package-specific errors."""


class PoleDomainError(DdestabError, ValueError):
    """An evaluation point sits on or past a pole of a rational function."""

    def __init__(self, pole: float, arg: float, what: str = "argument"):
        self.pole = pole
        self.arg = arg
        super().__init__(f"{what} {arg!r} is outside the domain (pole at {pole!r})")


class NoCrossingError(DdestabError, ValueError):
    """r(x) = -x has no positive solution for the given parameters."""

    def __init__(self, a: float, b: float):
        self.a = a
        self.b = b
        super().__init__(
            f"no-crossing: r(x) = -x has no positive root for a={a!r}, b={b!r} "
            "(requires a < -1 and b > 0)"
        )


class CriticalPointError(DdestabError, ValueError):
    """Schwarzian derivative requested at a point where |f'| is below guard."""

    def __init__(self, x: float, deriv: float):
        self.x = x
        self.deriv = deriv
        super().__init__(f"f'({x!r}) = {deriv!r} is below the critical-point guard")


class NegativeFeedbackError(DdestabError, ValueError):
    """A nonlinearity submitted for envelope fitting has f'(0) >= 0."""

    def __init__(self, slope: float):
        self.slope = slope
        super().__init__(f"negative feedback required: f'(0) = {slope!r} is not < 0")


class HistoryRangeError(DdestabError, ValueError):
    """A history lookup fell outside the stored span."""

    def __init__(self, t: float, lo: float, hi: float):
        self.t = t
        self.lo = lo
        self.hi = hi
        super().__init__(f"history query at t={t!r} outside stored range [{lo!r}, {hi!r}]")


class TailEventError(DdestabError, RuntimeError):
    """Tail metrics requested on a window contaminated by an integrator event."""

    def __init__(self, kind: str, time: float):
        self.kind = kind
        self.time = time
        super().__init__(f"tail window contains a {kind!r} event at t={time!r}")
