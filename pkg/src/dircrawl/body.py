"""Kinematics of a shape-controlled one-dimensional crawler.

The body occupies reference coordinates ``X in [0, L]``.  Its configuration
at time ``t`` is ``x(X, t) = x1(t) + s(X, t)`` where ``x1`` is the position
of the left end and the arc-length map ``s`` is piecewise affine, strictly
increasing, with ``s(0, t) == 0``.  A gait program prescribes ``s`` (and its
time rate) periodically in time; the force balance then determines ``x1``.

Rates are stored per interval as one-sided end values because traveling-wave
gaits produce velocity fields that jump at the wave fronts; for smooth gaits
the pairs are simply continuous nodal values.  The pointwise rate at ``X = 0``
is always zero (the arc-length origin is pinned to the left end).
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from typing import Callable, Union

__all__ = [
    "PiecewiseAffineShape",
    "ShapeRate",
    "BodyState",
    "Breather",
    "ConstantLength",
    "TwoSegmentPath",
    "CompositeStride",
    "SquareWave",
    "GaitProgram",
    "shape_at",
    "rate_at",
    "length",
    "eulerian_velocity",
    "zero_crossings",
]

_CORNER_RTOL = 1e-12


@dataclass(frozen=True)
class PiecewiseAffineShape:
    """Nodal representation of the arc-length map ``s(X)``.

    ``ref`` holds the node coordinates in the reference body (starting at 0),
    ``arc`` the current arc-length of each node (starting at 0).  Both are
    strictly increasing, which keeps the deformation one-to-one.
    """

    ref: tuple[float, ...]
    arc: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.ref) != len(self.arc) or len(self.ref) < 2:
            raise ValueError("shape needs matching ref/arc node lists with >= 2 nodes")
        if self.ref[0] != 0.0 or self.arc[0] != 0.0:
            raise ValueError("first node must be (0, 0)")
        for i in range(len(self.ref) - 1):
            if not self.ref[i + 1] > self.ref[i]:
                raise ValueError("reference coordinates must be strictly increasing")
            if not self.arc[i + 1] > self.arc[i]:
                raise ValueError("arc-lengths must be strictly increasing")

    @property
    def ref_length(self) -> float:
        return self.ref[-1]

    @property
    def length(self) -> float:
        return self.arc[-1]


@dataclass(frozen=True)
class ShapeRate:
    """Time rate of the arc-length map on the same node set as a shape.

    ``seg_rates[i]`` holds the rate at the left and right end of interval
    ``i``; the two values differ from the neighbouring interval's when the
    rate field jumps at the node (traveling waves).  ``one_sided`` flags
    rates taken at a gait corner time, where the right-sided convention is
    used.
    """

    ref: tuple[float, ...]
    seg_rates: tuple[tuple[float, float], ...]
    one_sided: bool = False

    def __post_init__(self) -> None:
        if len(self.seg_rates) != len(self.ref) - 1:
            raise ValueError("need exactly one rate pair per node interval")

    @classmethod
    def from_nodal(
        cls, ref: tuple[float, ...], values: tuple[float, ...], one_sided: bool = False
    ) -> "ShapeRate":
        """Build a continuous rate field from plain nodal values."""
        if len(values) != len(ref):
            raise ValueError("need one nodal rate per node")
        pairs = tuple((values[i], values[i + 1]) for i in range(len(ref) - 1))
        return cls(ref, pairs, one_sided)


@dataclass(frozen=True)
class BodyState:
    """Position of the body: left end plus current shape."""

    x1: float
    shape: PiecewiseAffineShape

    @property
    def x2(self) -> float:
        return self.x1 + self.shape.length


def _check_same_nodes(shape: PiecewiseAffineShape, rate: ShapeRate) -> None:
    if shape.ref != rate.ref:
        raise ValueError("shape and rate are defined on different node sets")


# ---------------------------------------------------------------------------
# Gait programs
# ---------------------------------------------------------------------------


def _bump(rest: float, delta: float, period: float, t: float) -> float:
    return rest + delta * math.sin(math.pi * t / period) ** 2


def _bump_rate(delta: float, period: float, t: float) -> float:
    return delta * (math.pi / period) * math.sin(2.0 * math.pi * t / period)


@dataclass(frozen=True)
class Breather:
    """One-segment crawler deforming affinely; shape fully described by its
    length ``l(t)``.

    The default profile is a smooth elongation/contraction bump
    ``l(t) = ref_length + delta * sin^2(pi t / period)``; a custom profile
    can be supplied as a pair of callables (length and its time derivative),
    optionally with the times where the rate changes sign (``corners``).
    """

    ref_length: float
    delta: float
    period: float
    profile: Callable[[float], float] | None = None
    profile_rate: Callable[[float], float] | None = None
    corners: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.ref_length <= 0.0 or self.period <= 0.0:
            raise ValueError("ref_length and period must be positive")
        if self.delta <= -self.ref_length:
            raise ValueError("delta must exceed -ref_length so the length stays positive")
        if (self.profile is None) != (self.profile_rate is None):
            raise ValueError("supply both profile and profile_rate, or neither")

    def length_at(self, t: float) -> float:
        tm = t % self.period
        if self.profile is not None:
            return self.profile(tm)
        return _bump(self.ref_length, self.delta, self.period, tm)

    def length_rate_at(self, t: float) -> float:
        tm = t % self.period
        if self.profile_rate is not None:
            return self.profile_rate(tm)
        return _bump_rate(self.delta, self.period, tm)

    def corner_times(self) -> tuple[float, ...]:
        if self.corners is not None:
            return self.corners
        if self.profile is not None:
            return (0.0, self.period)
        return (0.0, 0.5 * self.period, self.period)

    def monotone_corners(self) -> tuple[float, ...] | None:
        """Times splitting the profile into monotone pieces, when known."""
        if self.corners is not None:
            return self.corners
        return None if self.profile is not None else self.corner_times()

    def shape_at(self, t: float) -> PiecewiseAffineShape:
        l = self.length_at(t)
        if l <= 0.0:
            raise ValueError(f"profile produced non-positive length {l} at t={t}")
        return PiecewiseAffineShape((0.0, self.ref_length), (0.0, l))

    def rate_at(self, t: float) -> ShapeRate:
        ldot = self.length_rate_at(t)
        ref = (0.0, self.ref_length)
        return ShapeRate(ref, ((0.0, ldot),), one_sided=_near_corner(t, self))


@dataclass(frozen=True)
class ConstantLength:
    """Two adjacent segments whose lengths sum to the fixed total
    ``ref_length``; the single shape parameter is the first segment's length.

    Default profile: ``l1(t) = seg1_rest + delta * sin^2(pi t / period)``.
    """

    ref_length: float
    split: float
    seg1_rest: float
    delta: float
    period: float
    profile: Callable[[float], float] | None = None
    profile_rate: Callable[[float], float] | None = None
    corners: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.ref_length <= 0.0 or self.period <= 0.0:
            raise ValueError("ref_length and period must be positive")
        if not 0.0 < self.split < self.ref_length:
            raise ValueError("split must lie strictly inside (0, ref_length)")
        if (self.profile is None) != (self.profile_rate is None):
            raise ValueError("supply both profile and profile_rate, or neither")
        lo = min(self.seg1_rest, self.seg1_rest + self.delta)
        hi = max(self.seg1_rest, self.seg1_rest + self.delta)
        if self.profile is None and not (0.0 < lo and hi < self.ref_length):
            raise ValueError("first segment length must stay inside (0, ref_length)")

    def seg1_length_at(self, t: float) -> float:
        tm = t % self.period
        if self.profile is not None:
            return self.profile(tm)
        return _bump(self.seg1_rest, self.delta, self.period, tm)

    def seg1_rate_at(self, t: float) -> float:
        tm = t % self.period
        if self.profile_rate is not None:
            return self.profile_rate(tm)
        return _bump_rate(self.delta, self.period, tm)

    def corner_times(self) -> tuple[float, ...]:
        if self.corners is not None:
            return self.corners
        if self.profile is not None:
            return (0.0, self.period)
        return (0.0, 0.5 * self.period, self.period)

    def monotone_corners(self) -> tuple[float, ...] | None:
        """Times splitting the profile into monotone pieces, when known."""
        if self.corners is not None:
            return self.corners
        return None if self.profile is not None else self.corner_times()

    def shape_at(self, t: float) -> PiecewiseAffineShape:
        l1 = self.seg1_length_at(t)
        if not 0.0 < l1 < self.ref_length:
            raise ValueError(f"profile produced l1={l1} outside (0, {self.ref_length})")
        return PiecewiseAffineShape(
            (0.0, self.split, self.ref_length), (0.0, l1, self.ref_length)
        )

    def rate_at(self, t: float) -> ShapeRate:
        l1dot = self.seg1_rate_at(t)
        ref = (0.0, self.split, self.ref_length)
        return ShapeRate(ref, ((0.0, l1dot), (l1dot, 0.0)), one_sided=_near_corner(t, self))


@dataclass(frozen=True)
class TwoSegmentPath:
    """Two-segment crawler following a piecewise-linear closed path in
    segment-length space.

    ``times`` start at 0 and end at the period; ``l1``/``l2`` give the
    segment lengths at those instants and are interpolated linearly in
    between.  The path must close (first and last point equal) so the gait
    is periodic.
    """

    ref_length: float
    split: float
    times: tuple[float, ...]
    l1: tuple[float, ...]
    l2: tuple[float, ...]

    def __post_init__(self) -> None:
        n = len(self.times)
        if n < 2 or len(self.l1) != n or len(self.l2) != n:
            raise ValueError("times, l1 and l2 must have equal length >= 2")
        if self.times[0] != 0.0:
            raise ValueError("path must start at t = 0")
        for i in range(n - 1):
            if not self.times[i + 1] > self.times[i]:
                raise ValueError("times must be strictly increasing")
        if any(v <= 0.0 for v in self.l1) or any(v <= 0.0 for v in self.l2):
            raise ValueError("segment lengths must stay positive")
        if self.l1[0] != self.l1[-1] or self.l2[0] != self.l2[-1]:
            raise ValueError("path must close: first and last shape point equal")
        if not 0.0 < self.split < self.ref_length:
            raise ValueError("split must lie strictly inside (0, ref_length)")

    @property
    def period(self) -> float:
        return self.times[-1]

    def corner_times(self) -> tuple[float, ...]:
        return self.times

    def _locate(self, t: float) -> tuple[int, float]:
        tm = t % self.period
        k = min(bisect_right(self.times, tm) - 1, len(self.times) - 2)
        theta = (tm - self.times[k]) / (self.times[k + 1] - self.times[k])
        return k, theta

    def shape_at(self, t: float) -> PiecewiseAffineShape:
        k, theta = self._locate(t)
        l1 = self.l1[k] + theta * (self.l1[k + 1] - self.l1[k])
        l2 = self.l2[k] + theta * (self.l2[k + 1] - self.l2[k])
        return PiecewiseAffineShape(
            (0.0, self.split, self.ref_length), (0.0, l1, l1 + l2)
        )

    def rate_at(self, t: float) -> ShapeRate:
        k, _ = self._locate(t)
        dt = self.times[k + 1] - self.times[k]
        l1dot = (self.l1[k + 1] - self.l1[k]) / dt
        l2dot = (self.l2[k + 1] - self.l2[k]) / dt
        ref = (0.0, self.split, self.ref_length)
        pairs = ((0.0, l1dot), (l1dot, l1dot + l2dot))
        return ShapeRate(ref, pairs, one_sided=_near_corner(t, self))


@dataclass(frozen=True)
class CompositeStride:
    """Closed rectangle in segment-length space combining constant-length
    shifts with proportional whole-body scalings.

    With ``a = (lam + delta, lam)`` the cycle visits, in order,
    ``a -> (lam, lam + delta) -> h * (lam, lam + delta) -> h * a -> a``:
    the first and third edges keep the total length constant while the
    second and fourth scale the whole body by the factor ``h`` (and back).
    Each edge is traversed at constant speed in shape space over a quarter
    period; for rate-independent substrates the resulting displacement does
    not depend on that choice.
    """

    lam: float
    delta: float
    h: float
    period: float = 1.0

    def __post_init__(self) -> None:
        if self.lam <= 0.0 or self.delta <= 0.0:
            raise ValueError("lam and delta must be positive")
        if self.h <= 1.0:
            raise ValueError("h must exceed 1")
        if self.period <= 0.0:
            raise ValueError("period must be positive")
        # Scaling edges must be rays through the origin (cross product zero),
        # otherwise they are not whole-body proportional deformations.
        (a1, a2), (b1, b2), (c1, c2), (d1, d2) = self.vertices
        tol = 1e-12 * (self.h * (self.lam + self.delta)) ** 2
        if abs(b1 * c2 - b2 * c1) > tol or abs(d1 * a2 - d2 * a1) > tol:
            raise ValueError("scaling edges failed the proportionality check")

    @property
    def vertices(self) -> tuple[tuple[float, float], ...]:
        a = (self.lam + self.delta, self.lam)
        b = (self.lam, self.lam + self.delta)
        c = (self.h * b[0], self.h * b[1])
        d = (self.h * a[0], self.h * a[1])
        return (a, b, c, d)

    def as_path(self) -> TwoSegmentPath:
        (a1, a2), (b1, b2), (c1, c2), (d1, d2) = self.vertices
        q = self.period / 4.0
        return TwoSegmentPath(
            ref_length=2.0 * self.lam + self.delta,
            split=self.lam + self.delta,
            times=(0.0, q, 2.0 * q, 3.0 * q, self.period),
            l1=(a1, b1, c1, d1, a1),
            l2=(a2, b2, c2, d2, a2),
        )

    def corner_times(self) -> tuple[float, ...]:
        q = self.period / 4.0
        return (0.0, q, 2.0 * q, 3.0 * q, self.period)

    def shape_at(self, t: float) -> PiecewiseAffineShape:
        return self.as_path().shape_at(t)

    def rate_at(self, t: float) -> ShapeRate:
        return self.as_path().rate_at(t)


@dataclass(frozen=True)
class SquareWave:
    """Square stretching wave of width ``delta`` and amplitude ``epsilon``
    traveling rightwards at speed ``speed``.

    The wave enters at the left end, traverses the body, and exits at the
    right end, with stretch ``1 + epsilon`` inside the wave and 1 outside;
    one passage takes ``(ref_length + delta) / speed`` and the program
    repeats with that period.  ``epsilon > 0`` is an extension wave,
    ``-1 < epsilon < 0`` a contraction wave.
    """

    ref_length: float
    delta: float
    epsilon: float
    speed: float

    def __post_init__(self) -> None:
        if self.ref_length <= 0.0:
            raise ValueError("ref_length must be positive")
        if not 0.0 < self.delta < self.ref_length:
            raise ValueError("delta must satisfy 0 < delta < ref_length")
        if self.epsilon <= -1.0 or self.epsilon == 0.0:
            raise ValueError("epsilon must be > -1 and nonzero")
        if self.speed <= 0.0:
            raise ValueError("speed must be positive")

    @property
    def period(self) -> float:
        return (self.ref_length + self.delta) / self.speed

    def corner_times(self) -> tuple[float, ...]:
        c = self.speed
        return (0.0, self.delta / c, self.ref_length / c, self.period)

    def _nodes_and_rates(
        self, t: float
    ) -> tuple[list[tuple[float, float]], list[float]]:
        """Node list [(X, s), ...] plus the constant rate on each interval.

        Wave-front nodes are merged into their neighbours when rounding makes
        them unresolvable in either coordinate (the sliver they would bound
        has zero measure); this keeps the node lists strictly increasing at
        times arbitrarily close to the stage boundaries.
        """
        L, d, e, c = self.ref_length, self.delta, self.epsilon, self.speed
        tm = t % self.period
        ct = c * tm
        if tm < d / c:
            # wave entering: stretched region [0, ct)
            front = min(ct, L)
            pts = [(0.0, 0.0)]
            rates = []
            if front <= 0.0:
                pts.append((L, L))
                rates.append(e * c)
            elif front < L and (1.0 + e) * front < L + e * front:
                pts.append((front, (1.0 + e) * front))
                rates.append(0.0)
                pts.append((L, L + e * front))
                rates.append(e * c)
            else:
                pts.append((L, L + e * front))
                rates.append(0.0)
            return pts, rates
        if tm < L / c:
            # wave fully inside: [ct - d, ct)
            back = ct - d
            front = min(ct, L)
            pts = [(0.0, 0.0)]
            rates = []
            if back > 0.0:
                pts.append((back, back))
                rates.append(0.0)
            if front < L and front + e * d < L + e * d:
                pts.append((front, front + e * d))
                rates.append(-e * c)
                pts.append((L, L + e * d))
                rates.append(0.0)
            else:
                pts.append((L, L + e * d))
                rates.append(-e * c)
            return pts, rates
        # wave leaving: [ct - d, L]
        back = ct - d
        s_end = L + e * (L + d - ct)
        pts = [(0.0, 0.0)]
        rates = []
        if 0.0 < back < L and back < s_end:
            pts.append((back, back))
            rates.append(0.0)
            pts.append((L, s_end))
            rates.append(-e * c)
        else:
            # the wave sliver has collapsed against the right end
            pts.append((L, s_end))
            rates.append(0.0)
        return pts, rates

    def shape_at(self, t: float) -> PiecewiseAffineShape:
        pts, _ = self._nodes_and_rates(t)
        return PiecewiseAffineShape(tuple(p[0] for p in pts), tuple(p[1] for p in pts))

    def rate_at(self, t: float) -> ShapeRate:
        pts, rates = self._nodes_and_rates(t)
        ref = tuple(p[0] for p in pts)
        pairs = tuple((r, r) for r in rates)
        return ShapeRate(ref, pairs, one_sided=_near_corner(t, self))


GaitProgram = Union[Breather, ConstantLength, TwoSegmentPath, CompositeStride, SquareWave]


def _near_corner(t: float, gait: GaitProgram) -> bool:
    T = gait.period
    tm = t % T
    tol = _CORNER_RTOL * T
    for corner in gait.corner_times():
        if abs(tm - corner) <= tol or abs(tm - corner + T) <= tol:
            return True
    return False


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------


def shape_at(gait: GaitProgram, t: float) -> PiecewiseAffineShape:
    """Shape prescribed by the gait at time ``t`` (reduced mod the period)."""
    return gait.shape_at(t)


def rate_at(gait: GaitProgram, t: float) -> ShapeRate:
    """Shape rate at time ``t``; right-sided at gait corner times."""
    return gait.rate_at(t)


def length(shape: PiecewiseAffineShape) -> float:
    """Current body length (arc-length of the right end)."""
    return shape.length


def _rate_at_arc(shape: PiecewiseAffineShape, rate: ShapeRate, s: float) -> float:
    """Rate field value at arc-length ``s``, right-continuous at nodes."""
    arc = shape.arc
    idx = min(bisect_right(arc, s) - 1, len(arc) - 2)
    idx = max(idx, 0)
    s0, s1 = arc[idx], arc[idx + 1]
    r0, r1 = rate.seg_rates[idx]
    theta = (s - s0) / (s1 - s0)
    return r0 + theta * (r1 - r0)


def eulerian_velocity(
    shape: PiecewiseAffineShape, rate: ShapeRate, x1dot: float, s_query: float
) -> float:
    """Velocity of the material point currently at arc-length ``s_query``."""
    _check_same_nodes(shape, rate)
    if not 0.0 <= s_query <= shape.length:
        raise ValueError(f"arc-length {s_query} outside [0, {shape.length}]")
    return x1dot + _rate_at_arc(shape, rate, s_query)


def zero_crossings(
    shape: PiecewiseAffineShape, rate: ShapeRate, x1dot: float
) -> list[tuple[float, float]]:
    """Zero set of the velocity field, in arc-length.

    Returns ordered ``(lo, hi)`` pairs: ``lo == hi`` marks an isolated point
    where the velocity changes sign, ``lo < hi`` a maximal interval where
    the velocity vanishes identically.  Points where the velocity touches
    zero without changing sign are not reported.
    """
    _check_same_nodes(shape, rate)
    arc = shape.arc
    vtol = 0.0  # the field is exact piecewise-affine algebra; exact zeros only

    # Collect raw zero components piece by piece.
    raw: list[tuple[float, float]] = []
    for i in range(len(arc) - 1):
        s0, s1 = arc[i], arc[i + 1]
        r0, r1 = rate.seg_rates[i]
        v0, v1 = x1dot + r0, x1dot + r1
        if abs(v0) <= vtol and abs(v1) <= vtol:
            raw.append((s0, s1))
        elif v0 * v1 < 0.0:
            sz = s0 + (s1 - s0) * (-v0) / (v1 - v0)
            raw.append((sz, sz))
        elif v0 == 0.0:
            raw.append((s0, s0))
        elif v1 == 0.0:
            raw.append((s1, s1))
    if not raw:
        return []

    # Merge touching components.
    merged: list[list[float]] = [list(raw[0])]
    for lo, hi in raw[1:]:
        if lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])

    # Keep intervals always; keep points only where the sign changes across.
    def sign_near(s: float, side: int) -> float:
        probe = s + side * 1e-9 * max(shape.length, 1.0)
        probe = min(max(probe, 0.0), shape.length)
        v = x1dot + _rate_at_arc(shape, rate, probe)
        return math.copysign(1.0, v) if v != 0.0 else 0.0

    out: list[tuple[float, float]] = []
    for lo, hi in merged:
        if hi > lo:
            out.append((lo, hi))
            continue
        before = sign_near(lo, -1) if lo > 0.0 else 0.0
        after = sign_near(hi, +1) if hi < shape.length else 0.0
        if before != 0.0 and after != 0.0 and before != after:
            out.append((lo, hi))
    return out
