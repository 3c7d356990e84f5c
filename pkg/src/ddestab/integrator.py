"""Method-of-steps integration of x'(t) = f(t, x_t) with dense output.

The right-hand side only ever reads delayed data through a view over the
already-computed dense solution, so each fixed RK4 step is an ODE step with
frozen history (the method of steps).  Dense output is cubic Hermite per
step: the left slope is the stage-1 derivative (exact at the node), the
right slope reuses the stage-4 derivative, which is within O(dt^3) of the
true endpoint slope and so keeps the interpolant at the order of the
stepper without extra evaluations.

Blow-up and domain-exit are returned as trajectory events, never raised.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .dense import HermiteSeries
from .errors import HistoryRangeError, TailEventError

BLOWUP_THRESHOLD = 1e8


class HistoryView:
    """Read-only window [t_now - span, t_now] over a dense series."""

    __slots__ = ("series", "t_now", "span")

    def __init__(self, series: HermiteSeries, t_now: float, span: float):
        self.series = series
        self.t_now = t_now
        self.span = span

    def _slack(self):
        return 1e-9 * max(1.0, abs(self.t_now), self.span)

    def _check(self, s):
        lo = self.t_now - self.span
        slack = self._slack()
        if s < lo - slack or s > self.t_now + slack:
            raise HistoryRangeError(s, lo, self.t_now)
        return min(max(s, lo), self.t_now)

    @property
    def x_now(self) -> float:
        return self.series.value_at(self.t_now)

    def value_at(self, s: float) -> float:
        return self.series.value_at(self._check(s))

    def extrema_over(self, window):
        lo, hi = window
        return self.series.extrema_over(self._check(lo), self._check(hi))

    def max_over(self, window) -> float:
        return self.extrema_over(window)[1]

    def min_over(self, window) -> float:
        return self.extrema_over(window)[0]


class _StageView:
    """History view during an RK stage: stored series up to t_base, then a
    linear bridge from (t_base, x_base) to the stage point (t_now, x_now).

    The bridge is only read when a delay is shorter than the step or a max
    window reaches the current time; both uses tolerate its O(dt^2) error.
    """

    __slots__ = ("series", "t_base", "x_base", "t_now", "x_now", "span")

    def __init__(self, series, t_base, x_base, t_now, x_now, span):
        self.series = series
        self.t_base = t_base
        self.x_base = x_base
        self.t_now = t_now
        self.x_now = x_now
        self.span = span

    def _slack(self):
        return 1e-9 * max(1.0, abs(self.t_now), self.span)

    def _check(self, s):
        lo = self.t_now - self.span
        slack = self._slack()
        if s < lo - slack or s > self.t_now + slack:
            raise HistoryRangeError(s, lo, self.t_now)
        return min(max(s, lo), self.t_now)

    def _bridge(self, s):
        if s >= self.t_now:
            return self.x_now
        w = (s - self.t_base) / (self.t_now - self.t_base)
        return self.x_base + w * (self.x_now - self.x_base)

    def value_at(self, s: float) -> float:
        s = self._check(s)
        if s <= self.t_base:
            return self.series.value_at(s)
        return self._bridge(s)

    def extrema_over(self, window):
        lo, hi = window
        lo = self._check(lo)
        hi = self._check(hi)
        mn = math.inf
        mx = -math.inf
        if lo <= self.t_base:
            mn, mx = self.series.extrema_over(lo, min(hi, self.t_base))
        if hi > self.t_base:
            # linear bridge: extrema at the clipped endpoints
            for v in (self._bridge(max(lo, self.t_base)), self._bridge(hi)):
                mn = min(mn, v)
                mx = max(mx, v)
        return mn, mx

    def max_over(self, window) -> float:
        return self.extrema_over(window)[1]

    def min_over(self, window) -> float:
        return self.extrema_over(window)[0]


def yorke_max(view, window) -> float:
    """M(phi) = max(0, max of the view over the window)."""
    return max(0.0, view.max_over(window))


@dataclass(frozen=True)
class TrajectoryEvent:
    time: float
    kind: str  # "blowup" | "domain_violation"


@dataclass(frozen=True)
class TailMetrics:
    sup_dev: float
    M_est: float
    m_est: float

    def to_json(self) -> dict:
        return {"sup_dev": self.sup_dev, "M_est": self.M_est, "m_est": self.m_est}


@dataclass(frozen=True)
class Trajectory:
    """Dense solution including its initial history segment.

    The series covers [t_start - span, t_final]; grid exports start at
    t_start.  Events, if any, terminated the integration.
    """

    series: HermiteSeries
    t_start: float
    span: float
    events: tuple

    @property
    def t_final(self) -> float:
        return self.series.t_max

    def _idx0(self) -> int:
        ts = self.series.times
        for i, t in enumerate(ts):
            if t >= self.t_start:
                return i
        return len(ts) - 1

    @property
    def times(self):
        return self.series.times[self._idx0():]

    @property
    def values(self):
        return self.series.values[self._idx0():]

    def value_at(self, t: float) -> float:
        return self.series.value_at(t)

    def view_at(self, t: float) -> HistoryView:
        return HistoryView(self.series, t, self.span)

    def to_csv(self, resample=None) -> str:
        lines = ["t,x"]
        if resample is None:
            for t, x in zip(self.times, self.values):
                lines.append(f"{t!r},{x!r}")
        else:
            n = int(resample)
            if n < 1:
                raise ValueError("resample count must be >= 1")
            t0, t1 = self.t_start, self.t_final
            for j in range(n + 1):
                t = t0 + (t1 - t0) * j / n
                lines.append(f"{t!r},{self.series.value_at(t)!r}")
        for ev in self.events:
            lines.append(f"# event: {ev.kind} at t={ev.time!r}")
        return "\n".join(lines) + "\n"


def integrate(model, init: HistoryView, t_end: float, dt: float,
              blowup_threshold: float = BLOWUP_THRESHOLD) -> Trajectory:
    """Fixed-step classical RK4 over [init.t_now, t_end].

    dt must be at most span/10 and, for constant-delay models, divide the
    base delay so grid nodes stay phase-aligned with the breaking points.
    """
    span = model.span
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    if dt > span / 10.0 * (1.0 + 1e-12):
        raise ValueError(f"dt={dt!r} too large: must be <= span/10 = {span / 10.0!r}")
    base = getattr(model.meta, "base_delay", None)
    if base:
        ratio = base / dt
        if abs(ratio - round(ratio)) > 1e-9 * max(1.0, ratio):
            raise ValueError(f"dt={dt!r} must divide the base delay {base!r}")
    if init.span < span * (1.0 - 1e-12):
        raise ValueError(f"history span {init.span!r} shorter than model span {span!r}")
    t0 = init.t_now
    if not t_end > t0:
        raise ValueError(f"t_end={t_end!r} must exceed start time {t0!r}")
    if abs(init.series.t_max - t0) > 1e-9 * max(1.0, abs(t0)):
        raise ValueError("history series must end at its t_now")

    series = init.series.copy()
    rhs = model.rhs
    dom_low = getattr(model, "domain_low", -math.inf)

    n_exact = (t_end - t0) / dt
    n_steps = int(round(n_exact))
    if abs(n_steps - n_exact) > 1e-9 * max(1.0, n_exact):
        n_steps = int(math.ceil(n_exact))
    hmid = 0.5 * dt

    events = []
    x = series.value_at(t0)
    for k in range(n_steps):
        t = t0 + k * dt
        t1 = t0 + (k + 1) * dt
        try:
            k1 = rhs(t, HistoryView(series, t, span))
            k2 = rhs(t + hmid, _StageView(series, t, x, t + hmid, x + hmid * k1, span))
            k3 = rhs(t + hmid, _StageView(series, t, x, t + hmid, x + hmid * k2, span))
            k4 = rhs(t1, _StageView(series, t, x, t1, x + dt * k3, span))
        except OverflowError:
            events.append(TrajectoryEvent(t1, "blowup"))
            break
        x1 = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not math.isfinite(x1):
            events.append(TrajectoryEvent(t1, "blowup"))
            break
        series.append(t1, x1, k1, k4)
        x = x1
        if abs(x1) > blowup_threshold:
            events.append(TrajectoryEvent(t1, "blowup"))
            break
        if x1 <= dom_low:
            events.append(TrajectoryEvent(t1, "domain_violation"))
            break
    return Trajectory(series, t0, span, tuple(events))


def tail_metrics(traj: Trajectory, equilibrium: float, tail_fraction: float) -> TailMetrics:
    """Deviation extrema over the last tail_fraction of the computed span."""
    if not 0.0 < tail_fraction < 1.0:
        raise ValueError("tail_fraction must lie in (0, 1)")
    t1 = traj.t_final
    lo = t1 - tail_fraction * (t1 - traj.t_start)
    for ev in traj.events:
        if ev.time >= lo - 1e-12:
            raise TailEventError(ev.kind, ev.time)
    mn, mx = traj.series.extrema_over(lo, t1)
    M_est = mx - equilibrium
    m_est = mn - equilibrium
    return TailMetrics(max(abs(M_est), abs(m_est)), M_est, m_est)


# --------------------------------------------------------------------------
# history factories

def constant_history(value: float, span: float, t_now: float = 0.0) -> HistoryView:
    return HistoryView(HermiteSeries.constant(value, t_now - span, t_now), t_now, span)


def history_from_knots(times, values) -> HistoryView:
    """Piecewise-linear history through the given knots; t_now = last knot."""
    series = HermiteSeries.piecewise_linear(list(times), list(values))
    return HistoryView(series, series.t_max, series.t_max - series.t_min)


def history_from_function(fn, span: float, t_now: float = 0.0, knots: int = 129) -> HistoryView:
    """Sampled piecewise-linear approximation of fn over [t_now-span, t_now]."""
    times = [t_now - span + span * j / (knots - 1) for j in range(knots)]
    return history_from_knots(times, [fn(t) for t in times])


def random_history(seed: int, span: float, lo: float, hi: float,
                   t_now: float = 0.0, knots: int = 8) -> HistoryView:
    """Deterministic piecewise-linear history, values uniform in [lo, hi]."""
    rng = random.Random(seed)
    times = [t_now - span + span * j / (knots - 1) for j in range(knots)]
    return history_from_knots(times, [rng.uniform(lo, hi) for _ in times])
