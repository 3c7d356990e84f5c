"""Piecewise cubic Hermite series used as dense solver output and history.

Each segment [t_k, t_{k+1}] carries endpoint values and endpoint slopes, so
the series can represent constants and piecewise-linear data exactly (slopes
per segment, not per node, so kinks are allowed at nodes).  Queries at node
times return the stored node value bitwise.

Window extrema are computed per cubic piece from the critical points of the
cubic, not by sampling; full-segment extrema are cached since delayed
max-window reads revisit the same segments many times.
"""

from __future__ import annotations

import math
from bisect import bisect_right

from .errors import HistoryRangeError


class HermiteSeries:
    __slots__ = ("times", "values", "m_left", "m_right", "_ext_cache")

    def __init__(self, times, values, m_left, m_right):
        times = [float(t) for t in times]
        values = [float(v) for v in values]
        m_left = [float(m) for m in m_left]
        m_right = [float(m) for m in m_right]
        if len(times) < 2:
            raise ValueError("need at least two nodes")
        if not (len(times) == len(values) == len(m_left) + 1 == len(m_right) + 1):
            raise ValueError("node/slope array lengths inconsistent")
        for t0, t1 in zip(times, times[1:]):
            if not t1 > t0:
                raise ValueError("times must be strictly increasing")
        self.times = times
        self.values = values
        self.m_left = m_left    # slope at the left end of segment k
        self.m_right = m_right  # slope at the right end of segment k
        self._ext_cache = {}

    # ---- constructors

    @classmethod
    def constant(cls, value, t0, t1):
        return cls([t0, t1], [value, value], [0.0], [0.0])

    @classmethod
    def piecewise_linear(cls, times, values):
        slopes = [
            (v1 - v0) / (t1 - t0)
            for (t0, t1, v0, v1) in zip(times, times[1:], values, values[1:])
        ]
        return cls(times, values, slopes, list(slopes))

    @classmethod
    def from_nodes(cls, times, values, slopes):
        """C1 series: one slope per node, shared by adjacent segments."""
        return cls(times, values, list(slopes[:-1]), list(slopes[1:]))

    def copy(self):
        out = HermiteSeries.__new__(HermiteSeries)
        out.times = list(self.times)
        out.values = list(self.values)
        out.m_left = list(self.m_left)
        out.m_right = list(self.m_right)
        out._ext_cache = {}
        return out

    def append(self, t, value, m_left, m_right):
        """Grow by one segment from the current last node to (t, value)."""
        if not t > self.times[-1]:
            raise ValueError(f"append time {t!r} not past {self.times[-1]!r}")
        self.times.append(float(t))
        self.values.append(float(value))
        self.m_left.append(float(m_left))
        self.m_right.append(float(m_right))

    # ---- queries

    @property
    def t_min(self):
        return self.times[0]

    @property
    def t_max(self):
        return self.times[-1]

    def _slack(self):
        return 1e-9 * max(1.0, abs(self.times[0]), abs(self.times[-1]))

    def _clamp(self, t):
        # tolerate float dust just outside the stored range
        if t < self.times[0]:
            if self.times[0] - t > self._slack():
                raise HistoryRangeError(t, self.times[0], self.times[-1])
            return self.times[0]
        if t > self.times[-1]:
            if t - self.times[-1] > self._slack():
                raise HistoryRangeError(t, self.times[0], self.times[-1])
            return self.times[-1]
        return t

    def _locate(self, t):
        i = bisect_right(self.times, t) - 1
        if i < 0:
            i = 0
        if i > len(self.times) - 2:
            i = len(self.times) - 2
        return i

    def _coeffs(self, i):
        dt = self.times[i + 1] - self.times[i]
        p0, p1 = self.values[i], self.values[i + 1]
        dp = p1 - p0
        c1 = self.m_left[i] * dt
        c3 = self.m_right[i] * dt
        return p0, c1, 3.0 * dp - 2.0 * c1 - c3, -2.0 * dp + c1 + c3, dt

    def value_at(self, t):
        t = self._clamp(t)
        i = self._locate(t)
        if t == self.times[i]:
            return self.values[i]
        if t == self.times[i + 1]:
            return self.values[i + 1]
        c0, c1, c2, c3, dt = self._coeffs(i)
        th = (t - self.times[i]) / dt
        return c0 + th * (c1 + th * (c2 + th * c3))

    def derivative_at(self, t):
        t = self._clamp(t)
        i = self._locate(t)
        c0, c1, c2, c3, dt = self._coeffs(i)
        th = (t - self.times[i]) / dt
        return (c1 + th * (2.0 * c2 + th * 3.0 * c3)) / dt

    def _crit_thetas(self, c1, c2, c3):
        # roots of c1 + 2 c2 th + 3 c3 th^2 inside (0, 1)
        if c3 == 0.0:
            if c2 == 0.0:
                return ()
            th = -c1 / (2.0 * c2)
            return (th,) if 0.0 < th < 1.0 else ()
        disc = c2 * c2 - 3.0 * c3 * c1
        if disc < 0.0:
            return ()
        root = math.sqrt(disc)
        out = []
        for th in ((-c2 + root) / (3.0 * c3), (-c2 - root) / (3.0 * c3)):
            if 0.0 < th < 1.0:
                out.append(th)
        return tuple(out)

    def _segment_extrema(self, i):
        cached = self._ext_cache.get(i)
        if cached is not None:
            return cached
        c0, c1, c2, c3, _ = self._coeffs(i)
        lo = min(self.values[i], self.values[i + 1])
        hi = max(self.values[i], self.values[i + 1])
        for th in self._crit_thetas(c1, c2, c3):
            v = c0 + th * (c1 + th * (c2 + th * c3))
            lo = min(lo, v)
            hi = max(hi, v)
        self._ext_cache[i] = (lo, hi)
        return lo, hi

    def _partial_extrema(self, i, ta, tb):
        c0, c1, c2, c3, dt = self._coeffs(i)
        tha = (ta - self.times[i]) / dt
        thb = (tb - self.times[i]) / dt
        cands = [tha, thb]
        cands.extend(th for th in self._crit_thetas(c1, c2, c3) if tha < th < thb)
        vals = [c0 + th * (c1 + th * (c2 + th * c3)) for th in cands]
        return min(vals), max(vals)

    def extrema_over(self, lo, hi):
        """(min, max) of the interpolant over [lo, hi], exact per cubic piece."""
        lo = self._clamp(lo)
        hi = self._clamp(hi)
        if hi < lo:
            raise ValueError(f"empty window [{lo!r}, {hi!r}]")
        if hi == lo:
            v = self.value_at(lo)
            return v, v
        i0 = self._locate(lo)
        i1 = self._locate(hi)
        mn = math.inf
        mx = -math.inf
        for i in range(i0, i1 + 1):
            ta = max(lo, self.times[i])
            tb = min(hi, self.times[i + 1])
            if tb <= ta:
                continue
            if ta == self.times[i] and tb == self.times[i + 1]:
                smn, smx = self._segment_extrema(i)
            else:
                smn, smx = self._partial_extrema(i, ta, tb)
            mn = min(mn, smn)
            mx = max(mx, smx)
        return mn, mx

    def max_over(self, lo, hi):
        return self.extrema_over(lo, hi)[1]

    def min_over(self, lo, hi):
        return self.extrema_over(lo, hi)[0]
