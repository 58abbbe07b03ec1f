"""Quasi-static force balance for a shape-controlled crawler.

Given a shape, its rate, and a candidate left-end velocity ``x1dot``, the
velocity of the material point at arc-length ``s`` is
``v(s) = x1dot + rate(s)`` with ``rate`` piecewise affine.  The total
substrate force is the integral of the friction law over the current body;
it is a non-increasing, set-valued function of ``x1dot``.  ``solve_velocity``
finds the ``x1dot`` whose force value contains zero, exactly.

Structure exploited by the solver: for ``x1dot`` between two consecutive
breakpoints (the negated interval-end rates), the sign pattern of ``v`` on
every interval is fixed, so the total force is a quadratic polynomial in
``x1dot`` (affine when the viscosities match or no zero crossing lies inside
an interval).  The solution set of the balance is a closed interval; when it
has positive measure (dry plateaus, one-sided frictionless substrates) the
element closest to zero is returned, so that a vanishing force imbalance
produces no motion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .body import PiecewiseAffineShape, ShapeRate
from .errors import DegenerateSubstrateError
from .friction import ForceValue, FrictionLaw

__all__ = [
    "SLIDING",
    "STICK_SLIP",
    "WHOLE_BODY_STICK",
    "BalanceSolution",
    "total_force",
    "solve_velocity",
]

SLIDING = "sliding"
STICK_SLIP = "stick_slip"
WHOLE_BODY_STICK = "whole_body_stick"

_INF = math.inf


@dataclass(frozen=True)
class BalanceSolution:
    """Result of solving the force balance.

    ``regime`` is ``sliding`` when every material point moves, ``stick_slip``
    when some positive-length part is at rest while the rest slips, and
    ``whole_body_stick`` when nothing moves.  ``stick_intervals`` lists the
    resting parts in arc-length; ``residual`` is the distance of the achieved
    total force from zero.
    """

    x1dot: float
    regime: str
    residual: float
    stick_intervals: tuple[tuple[float, float], ...] = ()


def _pieces(
    shape: PiecewiseAffineShape, rate: ShapeRate
) -> list[tuple[float, float, float, float]]:
    if shape.ref != rate.ref:
        raise ValueError("shape and rate are defined on different node sets")
    out = []
    for i in range(len(shape.ref) - 1):
        r0, r1 = rate.seg_rates[i]
        out.append((shape.arc[i], shape.arc[i + 1], r0, r1))
    return out


def total_force(
    law: FrictionLaw, shape: PiecewiseAffineShape, rate: ShapeRate, x1dot: float
) -> ForceValue:
    """Integral of the friction force over the current body, exactly.

    Each affine piece of the velocity field is split at its zero crossing;
    sliding parts contribute ``yield * length + viscosity * (trapezoid of v)``
    and parts with identically zero velocity contribute the static interval
    ``[-tau_plus, tau_minus]`` times their length.  The result is a point
    unless some positive-length part is at rest.
    """
    tm, tp, mm, mp = law.tau_minus, law.tau_plus, law.mu_minus, law.mu_plus
    point_sum = 0.0
    static_len = 0.0
    for s0, s1, r0, r1 in _pieces(shape, rate):
        seg = s1 - s0
        v0 = x1dot + r0
        v1 = x1dot + r1
        if v0 == 0.0 and v1 == 0.0:
            static_len += seg
        elif v0 <= 0.0 and v1 <= 0.0:
            point_sum += tm * seg - mm * 0.5 * (v0 + v1) * seg
        elif v0 >= 0.0 and v1 >= 0.0:
            point_sum += -tp * seg - mp * 0.5 * (v0 + v1) * seg
        else:
            frac = v0 / (v0 - v1)
            len_a = frac * seg
            len_b = seg - len_a
            if v0 < 0.0:  # negative then positive
                point_sum += tm * len_a - mm * 0.5 * v0 * len_a
                point_sum += -tp * len_b - mp * 0.5 * v1 * len_b
            else:  # positive then negative
                point_sum += -tp * len_a - mp * 0.5 * v0 * len_a
                point_sum += tm * len_b - mm * 0.5 * v1 * len_b
    if static_len > 0.0:
        return ForceValue.interval(
            point_sum - tp * static_len, point_sum + tm * static_len
        )
    return ForceValue.point(point_sum)


def _segment_poly(
    law: FrictionLaw,
    pieces: list[tuple[float, float, float, float]],
    x_probe: float,
) -> tuple[float, float, float]:
    """Coefficients (a, b, c) of the total force a*x^2 + b*x + c, valid on
    the breakpoint-free segment containing ``x_probe``."""
    tm, tp, mm, mp = law.tau_minus, law.tau_plus, law.mu_minus, law.mu_plus
    a = b = c = 0.0
    for s0, s1, r0, r1 in pieces:
        seg = s1 - s0
        v0 = x_probe + r0
        v1 = x_probe + r1
        if v0 < 0.0 and v1 < 0.0:
            b += -mm * seg
            c += tm * seg - mm * 0.5 * (r0 + r1) * seg
        elif v0 > 0.0 and v1 > 0.0:
            b += -mp * seg
            c += -tp * seg - mp * 0.5 * (r0 + r1) * seg
        elif v0 < 0.0 < v1:
            k = seg / (r1 - r0)
            a += 0.5 * (mm - mp) * k
            b += (-tm - tp + mm * r0 - mp * r1) * k
            c += (-tm * r0 - tp * r1 + 0.5 * (mm * r0 * r0 - mp * r1 * r1)) * k
        elif v1 < 0.0 < v0:
            k = seg / (r0 - r1)
            a += 0.5 * (mm - mp) * k
            b += (-tm - tp - mp * r0 + mm * r1) * k
            c += (-tp * r0 - tm * r1 + 0.5 * (mm * r1 * r1 - mp * r0 * r0)) * k
        else:
            # probes are strictly between breakpoints, so no endpoint is zero
            raise AssertionError("probe landed on a breakpoint")
    return a, b, c


def _poly_roots_in(
    a: float, b: float, c: float, lo: float, hi: float
) -> list[float]:
    """Real roots of a*x^2 + b*x + c inside [lo, hi], numerically stable."""
    if math.isfinite(lo) and math.isfinite(hi):
        span = hi - lo
    else:
        span = max(abs(x) for x in (lo, hi) if math.isfinite(x)) if (
            math.isfinite(lo) or math.isfinite(hi)
        ) else 1.0
    slack = 1e-12 * max(span, 1.0)

    def keep(x: float) -> bool:
        return lo - slack <= x <= hi + slack

    if a == 0.0:
        if b == 0.0:
            return []
        x = -c / b
        return [x] if keep(x) else []
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        if disc > -1e-12 * (b * b + abs(4.0 * a * c)):
            disc = 0.0
        else:
            return []
    sq = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(sq, b)) if b != 0.0 else -0.5 * sq
    roots = [q / a, c / q] if q != 0.0 else [0.0]
    return [x for x in roots if keep(x)]


def solve_velocity(
    law: FrictionLaw, shape: PiecewiseAffineShape, rate: ShapeRate
) -> BalanceSolution:
    """Left-end velocity at which the total substrate force vanishes.

    A solution always exists for valid laws: friction only opposes motion,
    so the total force is non-negative once everything slides backward and
    non-positive once everything slides forward.  One-sided frictionless
    substrates make the solution set a half-line, resolved by the
    closest-to-zero rule.  :class:`DegenerateSubstrateError` is raised only
    as an internal guard if no candidate is found.
    """
    pieces = _pieces(shape, rate)
    l_total = shape.length
    rates_all = [r for p in pieces for r in (p[2], p[3])]
    vscale = max(1.0, max(abs(r) for r in rates_all))
    fscale = (
        law.tau_minus + law.tau_plus + (law.mu_minus + law.mu_plus) * vscale
    ) * l_total
    atol = 1e-13 * max(fscale, 1e-300)

    breaks = sorted({-r for r in rates_all})
    fvals = [total_force(law, shape, rate, b) for b in breaks]

    candidates: list[tuple[float, float]] = []

    for b, fv in zip(breaks, fvals):
        if fv.lo <= atol and fv.hi >= -atol:
            candidates.append((b, b))

    for k in range(len(breaks) - 1):
        g0, g1 = breaks[k], breaks[k + 1]
        f_right_of_g0 = fvals[k].lo
        f_left_of_g1 = fvals[k + 1].hi
        if f_right_of_g0 > atol and f_left_of_g1 < -atol:
            a, bq, cq = _segment_poly(law, pieces, 0.5 * (g0 + g1))
            roots = _poly_roots_in(a, bq, cq, g0, g1)
            if not roots:
                raise AssertionError("bracketed segment produced no root")
            if len(roots) > 1:
                roots.sort(key=lambda x: abs(_force_mag(law, shape, rate, x)))
            candidates.append((roots[0], roots[0]))
        elif f_right_of_g0 <= atol and f_left_of_g1 >= -atol:
            candidates.append((g0, g1))  # force within tolerance on the whole gap

    # Left tail: all velocities negative, force affine with slope -mu_minus*l.
    b0, f0 = breaks[0], fvals[0]
    if f0.hi < -atol:
        if law.mu_minus > 0.0:
            a, bq, cq = _segment_poly(law, pieces, b0 - 1.0 - abs(b0))
            roots = _poly_roots_in(a, bq, cq, -_INF, b0)
            if roots:
                candidates.append((roots[0], roots[0]))
    elif abs(f0.hi) <= atol and law.mu_minus == 0.0:
        candidates.append((-_INF, b0))

    # Right tail: all velocities positive, slope -mu_plus*l.
    b1, f1 = breaks[-1], fvals[-1]
    if f1.lo > atol:
        if law.mu_plus > 0.0:
            a, bq, cq = _segment_poly(law, pieces, b1 + 1.0 + abs(b1))
            roots = _poly_roots_in(a, bq, cq, b1, _INF)
            if roots:
                candidates.append((roots[0], roots[0]))
    elif abs(f1.lo) <= atol and law.mu_plus == 0.0:
        candidates.append((b1, _INF))

    if not candidates:
        raise DegenerateSubstrateError(
            "force balance has no solution: the substrate cannot resist the "
            "imposed shape change (unbounded sliding)"
        )

    x_star = min((_closest_to_zero(lo, hi) for lo, hi in candidates), key=abs)

    # Classify the velocity field at the solution.
    stick: list[tuple[float, float]] = []
    stick_tol = 1e-12 * vscale
    for s0, s1, r0, r1 in pieces:
        if r0 == r1 and abs(x_star + r0) <= stick_tol:
            if stick and stick[-1][1] == s0:
                stick[-1] = (stick[-1][0], s1)
            else:
                stick.append((s0, s1))
    stick_len = sum(hi - lo for lo, hi in stick)
    if stick_len >= l_total * (1.0 - 1e-12):
        regime = WHOLE_BODY_STICK
    elif stick:
        regime = STICK_SLIP
    else:
        regime = SLIDING

    residual = _force_mag(law, shape, rate, x_star)
    return BalanceSolution(
        x1dot=x_star,
        regime=regime,
        residual=residual,
        stick_intervals=tuple(stick),
    )


def _closest_to_zero(lo: float, hi: float) -> float:
    if lo <= 0.0 <= hi:
        return 0.0
    return hi if hi < 0.0 else lo


def _force_mag(
    law: FrictionLaw, shape: PiecewiseAffineShape, rate: ShapeRate, x: float
) -> float:
    fv = total_force(law, shape, rate, x)
    if fv.contains(0.0):
        return 0.0
    return min(abs(fv.lo), abs(fv.hi))
