"""Piecewise-linear envelopes around case polylines in parallel coordinates.

For each adjacent-axis strip the member cases contribute straight segments
over t in [0, 1]; the envelope's upper boundary is their pointwise maximum and
the lower boundary their pointwise minimum.  Unlike the bounding box, the
boundary follows only actual case segments, so synthetic polylines that cut
through box corners no real case traced fall outside.

Breakpoints are intersection points of member segments and are computed in
exact rational arithmetic so containment verdicts are deterministic; a member
polyline always tests as contained because it attains the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

Point = tuple[Fraction, Fraction]


def _upper_hull(lines: list[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    """Upper envelope of lines y = c + m*t as an ordered hull, slopes ascending.

    Returns the subsequence of (m, c) lines that appear on the envelope over
    the whole real line, leftmost piece first.
    """
    by_slope: dict[Fraction, Fraction] = {}
    for m, c in lines:
        if m not in by_slope or c > by_slope[m]:
            by_slope[m] = c
    ordered = sorted(by_slope.items())  # ascending slope, max intercept per slope
    hull: list[tuple[Fraction, Fraction]] = []
    for m, c in ordered:
        while len(hull) >= 2:
            m1, c1 = hull[-1]
            m2, c2 = hull[-2]
            # hull[-1] is useless if the new line overtakes hull[-2] no later
            # than hull[-1] did; slopes ascend so both denominators are positive
            if (c2 - c) * (m1 - m2) <= (c2 - c1) * (m - m2):
                hull.pop()
            else:
                break
        hull.append((m, c))
    return hull


def _hull_to_breakpoints(hull: list[tuple[Fraction, Fraction]]) -> list[Point]:
    """Clip an envelope hull to the strip window t in [0, 1] and return its
    breakpoints (t, y), endpoints included."""
    zero, one = Fraction(0), Fraction(1)
    crossings = []  # crossings[i] is where hull[i] hands over to hull[i+1]
    for (m1, c1), (m2, c2) in zip(hull[:-1], hull[1:]):
        crossings.append((c1 - c2) / (m2 - m1))

    def value_at(t: Fraction) -> Fraction:
        idx = 0
        while idx < len(crossings) and crossings[idx] < t:
            idx += 1
        m, c = hull[idx]
        return c + m * t

    points: list[Point] = [(zero, value_at(zero))]
    for i, t in enumerate(crossings):
        if zero < t < one and t != points[-1][0]:
            m, c = hull[i]
            points.append((t, c + m * t))
    points.append((one, value_at(one)))
    return points


def _piecewise_value(points: list[Point], t: Fraction) -> Fraction:
    """Evaluate a breakpoint list at t by exact linear interpolation."""
    if t <= points[0][0]:
        return points[0][1]
    for (t0, y0), (t1, y1) in zip(points[:-1], points[1:]):
        if t0 <= t <= t1:
            if t1 == t0:
                return y1
            return y0 + (y1 - y0) * (t - t0) / (t1 - t0)
    return points[-1][1]


@dataclass(frozen=True)
class Strip:
    upper: tuple[Point, ...]
    lower: tuple[Point, ...]

    def upper_at(self, t: Fraction) -> Fraction:
        return _piecewise_value(list(self.upper), t)

    def lower_at(self, t: Fraction) -> Fraction:
        return _piecewise_value(list(self.lower), t)

    @property
    def breakpoint_ts(self) -> list[Fraction]:
        ts = sorted({t for t, _ in self.upper} | {t for t, _ in self.lower})
        return ts


@dataclass(frozen=True)
class Envelope:
    axis_order: tuple[str, ...]
    strips: tuple[Strip, ...]

    def to_json(self) -> dict:
        return {
            "axis_order": list(self.axis_order),
            "strips": [
                {
                    "upper": [[float(t), float(y)] for t, y in s.upper],
                    "lower": [[float(t), float(y)] for t, y in s.lower],
                }
                for s in self.strips
            ],
        }


def build_modified_envelope(polylines: np.ndarray, axis_order) -> Envelope:
    """Envelope of the given case polylines (rows), one value per axis in
    axis_order.  Needs at least one polyline."""
    P = np.atleast_2d(np.asarray(polylines, dtype=np.float64))
    axis_order = tuple(axis_order)
    if P.shape[0] < 1:
        raise ValueError("envelope needs at least one polyline")
    if P.shape[1] != len(axis_order):
        raise ValueError(f"polylines have {P.shape[1]} vertices but axis order names {len(axis_order)}")

    strips = []
    for j in range(len(axis_order) - 1):
        lines = []
        for row in P:
            y0 = Fraction(float(row[j]))
            y1 = Fraction(float(row[j + 1]))
            lines.append((y1 - y0, y0))  # slope, intercept over t in [0,1]
        upper = _hull_to_breakpoints(_upper_hull(lines))
        neg = [(-m, -c) for m, c in lines]
        lower = [(t, -y) for t, y in _hull_to_breakpoints(_upper_hull(neg))]
        strips.append(Strip(tuple(upper), tuple(lower)))
    return Envelope(axis_order, tuple(strips))


def envelope_contains(env: Envelope, case) -> bool:
    """True iff the case's polyline stays within [lower, upper] on every strip.

    Checking at every breakpoint is exact: between breakpoints both the
    boundary and the case segment are linear.
    """
    values = np.asarray(case, dtype=np.float64)
    if values.shape[0] != len(env.axis_order):
        raise ValueError("case dimension does not match envelope axis order")
    for j, strip in enumerate(env.strips):
        y0 = Fraction(float(values[j]))
        y1 = Fraction(float(values[j + 1]))
        for t in strip.breakpoint_ts:
            g = y0 + (y1 - y0) * t
            if g > strip.upper_at(t) or g < strip.lower_at(t):
                return False
    return True
