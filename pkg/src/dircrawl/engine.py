"""Time integration of gaits, per-cycle accounting, verification and sweeps.

Because the substrate is homogeneous, the solved left-end velocity depends
on time only (never on position), so trajectories are pure quadrature of
``x1dot(t)``.  The integrator is composite midpoint with sample points
forced at every gait corner/stage boundary; between corners the velocity is
smooth (often constant), so midpoint keeps full accuracy with no special
handling of kinks.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from itertools import product
from typing import Any, Sequence

import numpy as np

from . import analytic
from .balance import solve_velocity
from .body import (
    Breather,
    CompositeStride,
    ConstantLength,
    GaitProgram,
    SquareWave,
)
from .errors import DegenerateSubstrateError, MixedRheologyError, UnsupportedPairError
from .friction import FrictionLaw

__all__ = [
    "Trajectory",
    "CycleReport",
    "VerifyCheck",
    "VerifyReport",
    "SweepRow",
    "simulate",
    "cycle_displacement",
    "verify",
    "sweep",
    "figure6_data",
    "figure7_data",
    "FIG6_COLUMNS",
    "FIG7_COLUMNS",
]

_DEFAULT_STEPS_PER_PERIOD = 2000


@dataclass(frozen=True)
class Trajectory:
    """Sampled motion of the crawler.

    ``regimes[i]`` tags the balance regime of the step from ``times[i]`` to
    ``times[i+1]``; positions satisfy ``x2 - x1 == l`` at every sample by
    construction.
    """

    times: np.ndarray
    x1: np.ndarray
    x2: np.ndarray
    l: np.ndarray
    regimes: tuple[str, ...]
    meta: dict[str, Any]

    @property
    def net_displacement(self) -> float:
        return float(self.x1[-1] - self.x1[0])


@dataclass(frozen=True)
class CycleReport:
    """Per-cycle displacement accounting for one gait period."""

    gait_kind: str
    net_displacement: float
    contributions: tuple[tuple[str, float], ...]
    analytic_value: float | None
    abs_residual: float | None
    rel_residual: float | None
    admissibility: analytic.WaveAdmissibility | None
    n_steps: int
    dt: float
    meta: dict[str, Any]


def _stage_grid(gait: GaitProgram, dt: float) -> tuple[list[float], list[int]]:
    """One period of sample times plus the stage index of each step."""
    T = gait.period
    corners = sorted({min(max(c, 0.0), T) for c in gait.corner_times()} | {0.0, T})
    times: list[float] = [0.0]
    stages: list[int] = []
    for k in range(len(corners) - 1):
        a, b = corners[k], corners[k + 1]
        if b <= a:
            continue
        n = max(1, math.ceil((b - a) / dt - 1e-9))
        for j in range(1, n + 1):
            times.append(a + (b - a) * j / n)
            stages.append(k)
    times[-1] = T
    return times, stages


def simulate(
    law: FrictionLaw,
    gait: GaitProgram,
    n_periods: int = 1,
    dt: float | None = None,
    x0: float = 0.0,
) -> Trajectory:
    """Integrate the gait for ``n_periods`` periods starting from ``x0``.

    ``dt`` is the target step within each stage (default: period/2000);
    stage boundaries are always sampled exactly.
    """
    if n_periods < 1:
        raise ValueError("n_periods must be >= 1")
    T = gait.period
    if dt is None:
        dt = T / _DEFAULT_STEPS_PER_PERIOD
    if dt <= 0.0:
        raise ValueError("dt must be positive")

    period_times, _ = _stage_grid(gait, dt)
    times: list[float] = [0.0]
    for p in range(n_periods):
        offset = p * T
        times.extend(offset + t for t in period_times[1:])

    x1 = np.empty(len(times))
    lengths = np.empty(len(times))
    regimes: list[str] = []
    x1[0] = x0
    lengths[0] = gait.shape_at(times[0]).length
    for i in range(len(times) - 1):
        t0, t1 = times[i], times[i + 1]
        tm = 0.5 * (t0 + t1)
        try:
            sol = solve_velocity(law, gait.shape_at(tm), gait.rate_at(tm))
        except DegenerateSubstrateError as exc:
            raise DegenerateSubstrateError(f"{exc} (at t = {tm})") from exc
        x1[i + 1] = x1[i] + sol.x1dot * (t1 - t0)
        lengths[i + 1] = gait.shape_at(t1).length
        regimes.append(sol.regime)

    times_arr = np.asarray(times)
    meta = {
        "gait_kind": type(gait).__name__,
        "n_periods": n_periods,
        "dt": dt,
        "law": law,
        "gait": gait,
    }
    return Trajectory(
        times=times_arr,
        x1=x1,
        x2=x1 + lengths,
        l=lengths,
        regimes=tuple(regimes),
        meta=meta,
    )


_STAGE_LABELS = {
    SquareWave: ("wave_enter", "wave_inside", "wave_exit"),
    CompositeStride: ("seg1_contract", "scale_up", "seg1_extend", "scale_down"),
}


def _analytic_cycle_value(
    law: FrictionLaw, gait: GaitProgram
) -> tuple[float | None, analytic.WaveAdmissibility | None, str | None]:
    """Closed-form per-cycle displacement when one exists, plus wave
    admissibility and a note when no closed form applies."""
    if isinstance(gait, Breather):
        value = analytic.breather_cycle_displacement(
            law,
            gait.length_at,
            gait.length_rate_at,
            gait.period,
            corners=gait.monotone_corners(),
        )
        return value, None, None
    if isinstance(gait, ConstantLength):
        value = analytic.breather_cycle_displacement(
            law,
            gait.seg1_length_at,
            gait.seg1_rate_at,
            gait.period,
            corners=gait.monotone_corners(),
        )
        return value, None, None
    if isinstance(gait, CompositeStride):
        try:
            stride = analytic.composite_stride_displacement(
                law, gait.lam, gait.delta, gait.h
            )
        except MixedRheologyError as exc:
            return None, None, str(exc)
        return stride.total, None, None
    if isinstance(gait, SquareWave):
        adm = analytic.wave_admissibility(
            law, gait.epsilon, gait.speed, gait.delta, gait.ref_length
        )
        if adm.regime == "stick_slip":
            return analytic.stickslip_displacement(gait.epsilon, gait.delta), adm, None
        if adm.regime == "sliding":
            sliding = analytic.sliding_cycle_displacement(
                law, gait.epsilon, gait.speed, gait.delta, gait.ref_length
            )
            return sliding.total, adm, None
        return None, adm, f"wave infeasible: {adm.violated_condition}"
    return None, None, f"no closed form for gait {type(gait).__name__}"


def cycle_displacement(
    law: FrictionLaw, gait: GaitProgram, dt: float | None = None
) -> CycleReport:
    """Simulate one period and attach the matching closed form when one
    exists (simulation always runs, even for infeasible wave requests)."""
    T = gait.period
    if dt is None:
        dt = T / _DEFAULT_STEPS_PER_PERIOD
    period_times, stages = _stage_grid(gait, dt)

    n_stages = max(stages) + 1 if stages else 1
    stage_sums = [0.0] * n_stages
    x = 0.0
    regime_counts: dict[str, int] = {}
    for i in range(len(period_times) - 1):
        t0, t1 = period_times[i], period_times[i + 1]
        sol = solve_velocity(law, gait.shape_at(0.5 * (t0 + t1)), gait.rate_at(0.5 * (t0 + t1)))
        dx = sol.x1dot * (t1 - t0)
        x += dx
        stage_sums[stages[i]] += dx
        regime_counts[sol.regime] = regime_counts.get(sol.regime, 0) + 1

    labels = _STAGE_LABELS.get(type(gait))
    if labels is not None and len(labels) == n_stages:
        contributions = tuple(zip(labels, stage_sums))
    else:
        contributions = tuple((f"stage_{k}", s) for k, s in enumerate(stage_sums))

    value, adm, note = _analytic_cycle_value(law, gait)
    abs_res = abs(x - value) if value is not None else None
    rel_res = abs_res / max(1.0, abs(value)) if value is not None else None

    meta: dict[str, Any] = {"regime_counts": regime_counts}
    if note:
        meta["note"] = note
    if isinstance(gait, CompositeStride):
        meta["edge_parameterization"] = "constant speed in shape space over quarter periods"
    return CycleReport(
        gait_kind=type(gait).__name__,
        net_displacement=x,
        contributions=contributions,
        analytic_value=value,
        abs_residual=abs_res,
        rel_residual=rel_res,
        admissibility=adm,
        n_steps=len(period_times) - 1,
        dt=dt,
        meta=meta,
    )


@dataclass(frozen=True)
class VerifyCheck:
    name: str
    numeric: float
    analytic: float
    residual: float
    tolerance: float
    passed: bool


@dataclass(frozen=True)
class VerifyReport:
    checks: tuple[VerifyCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _check(name: str, numeric: float, target: float, tol: float) -> VerifyCheck:
    residual = abs(numeric - target)
    return VerifyCheck(
        name, numeric, target, residual, tol, residual <= tol * max(1.0, abs(target))
    )


def verify(
    law: FrictionLaw, gait: GaitProgram, dt: float | None = None, tol: float = 1e-6
) -> VerifyReport:
    """Compare simulated displacements against the closed forms.

    Raises :class:`UnsupportedPairError` when no closed form covers the
    (law, gait) pair.
    """
    report = cycle_displacement(law, gait, dt=dt)
    if report.analytic_value is None:
        raise UnsupportedPairError(
            f"no closed-form reference for {type(gait).__name__} on this substrate"
            + (f" ({report.meta.get('note')})" if report.meta.get("note") else "")
        )
    checks = [_check("cycle_displacement", report.net_displacement, report.analytic_value, tol)]
    if isinstance(gait, SquareWave) and report.admissibility is not None:
        if report.admissibility.regime == "sliding":
            sliding = analytic.sliding_cycle_displacement(
                law, gait.epsilon, gait.speed, gait.delta, gait.ref_length
            )
            for label, target in zip(
                ("wave_enter", "wave_inside", "wave_exit"),
                (sliding.enter, sliding.inside, sliding.exit),
            ):
                numeric = dict(report.contributions)[label]
                checks.append(_check(f"stage:{label}", numeric, target, tol))
            checks.append(
                _check(
                    "stage_identity_exit_minus_enter",
                    sliding.exit - sliding.enter,
                    gait.epsilon * gait.delta,
                    1e-10,
                )
            )
    if isinstance(gait, CompositeStride) and report.analytic_value is not None:
        stride = analytic.composite_stride_displacement(law, gait.lam, gait.delta, gait.h)
        for (label, numeric), target in zip(report.contributions, stride.edges):
            checks.append(_check(f"edge:{label}", numeric, target, tol))
    return VerifyReport(tuple(checks))


@dataclass(frozen=True)
class SweepRow:
    """One grid point of a parameter sweep; ``error`` is set (and ``report``
    None) when that point failed, without aborting the sweep."""

    index: int
    params: tuple[tuple[str, float], ...]
    report: CycleReport | None
    error: str | None


_FIELD_ALIASES = {"lambda": "lam", "L": "ref_length", "T": "period", "x_star": "split", "c": "speed"}


def _apply_axis(obj: Any, field_name: str, value: float) -> Any:
    name = _FIELD_ALIASES.get(field_name, field_name)
    if not hasattr(obj, name):
        raise ValueError(f"{type(obj).__name__} has no field {field_name!r}")
    return replace(obj, **{name: value})


def sweep(
    law: FrictionLaw,
    gait: GaitProgram,
    axes: Sequence[tuple[str, Sequence[float]]],
    dt: float | None = None,
    workers: int | None = None,
) -> list[SweepRow]:
    """Cartesian-product sweep over ``law.*`` / ``gait.*`` fields.

    Each axis is ``(path, values)`` with path like ``"gait.epsilon"`` or
    ``"law.tau_plus"``.  Rows are returned in grid order (last axis fastest)
    regardless of execution order; per-row failures are captured in the row.
    Set ``workers`` (or the ``DIRCRAWL_SWEEP_WORKERS`` environment variable)
    to evaluate rows in a thread pool.
    """
    for path, _ in axes:
        target, _, field_name = path.partition(".")
        if target not in ("law", "gait") or not field_name:
            raise ValueError(f"axis path must be 'law.<field>' or 'gait.<field>', got {path!r}")

    if workers is None:
        workers = int(os.environ.get("DIRCRAWL_SWEEP_WORKERS", "0") or 0)

    grid = list(product(*(values for _, values in axes))) if axes else [()]

    def run(idx_point: tuple[int, tuple[float, ...]]) -> SweepRow:
        idx, point = idx_point
        params = tuple((axes[k][0], float(v)) for k, v in enumerate(point))
        try:
            row_law, row_gait = law, gait
            for (path, _), value in zip(axes, point):
                target, _, field_name = path.partition(".")
                if target == "law":
                    row_law = _apply_axis(row_law, field_name, value)
                else:
                    row_gait = _apply_axis(row_gait, field_name, value)
            return SweepRow(idx, params, cycle_displacement(row_law, row_gait, dt=dt), None)
        except Exception as exc:  # captured per row by contract
            return SweepRow(idx, params, None, f"{type(exc).__name__}: {exc}")

    items = list(enumerate(grid))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(run, items))
    else:
        rows = [run(item) for item in items]
    rows.sort(key=lambda r: r.index)
    return rows


# ---------------------------------------------------------------------------
# Figure data
# ---------------------------------------------------------------------------

FIG6_COLUMNS = ("alpha", "epsilon", "dx1_over_L")
FIG7_COLUMNS = ("beta", "beta_squared", "epsilon", "dx1_over_L")

_FIG_DEFAULT_EPSILONS = tuple(round(-0.98 + 0.02 * k, 10) for k in range(99))


def figure6_data(
    alphas: Sequence[float] | None = None,
    epsilons: Sequence[float] | None = None,
    L: float = 1.0,
) -> list[tuple[float, float, float]]:
    """Best stick-slip displacement per cycle on dry substrates, tabulated
    over wave amplitude for one curve per asymmetry ratio."""
    if alphas is None:
        alphas = (0.25, 0.5, 0.75)
    if epsilons is None:
        epsilons = _FIG_DEFAULT_EPSILONS
    rows = []
    for a in alphas:
        for e in epsilons:
            if e <= -1.0:
                raise ValueError("epsilon must exceed -1")
            value = 0.0 if e == 0.0 else analytic.stickslip_max_displacement_dry(a, e, L) / L
            rows.append((float(a), float(e), value))
    return rows


def figure7_data(
    betas: Sequence[float] | None = None,
    epsilons: Sequence[float] | None = None,
    delta_over_length: float = 0.25,
) -> list[tuple[float, float, float, float]]:
    """Sliding displacement per cycle on Newtonian substrates at fixed
    relative wave width, one curve per viscous asymmetry ratio."""
    if betas is None:
        betas = tuple(math.sqrt(b2) for b2 in (0.25, 0.5, 1.0, 2.0, 4.0))
    if epsilons is None:
        epsilons = _FIG_DEFAULT_EPSILONS
    if not 0.0 < delta_over_length < 1.0:
        raise ValueError("delta_over_length must lie in (0, 1)")
    rows = []
    for b in betas:
        for e in epsilons:
            if not -1.0 < e:
                raise ValueError("epsilon must exceed -1")
            value = (
                0.0
                if e == 0.0
                else analytic.newtonian_sliding_displacement(b, e, delta_over_length, 1.0)
            )
            rows.append((float(b), float(b) ** 2, float(e), value))
    return rows
