import math

import numpy as np
import pytest

from dircrawl import engine
from dircrawl.analytic import (
    newtonian_sliding_displacement,
    sliding_cycle_displacement,
    stickslip_delta_max,
    stickslip_max_displacement_dry,
)
from dircrawl.body import Breather, CompositeStride, ConstantLength, SquareWave, TwoSegmentPath
from dircrawl.errors import UnsupportedPairError
from dircrawl.friction import FrictionLaw, scale


class TestSimulate:
    def test_dry_breather_cycle(self):
        law = FrictionLaw(0.75, 0.25, 0, 0)
        traj = engine.simulate(law, Breather(ref_length=1.0, delta=1.0, period=1.0))
        assert abs(traj.net_displacement - 0.5) < 1e-6

    def test_symmetric_law_goes_nowhere(self):
        law = FrictionLaw(1.0, 1.0, 2.0, 2.0)
        traj = engine.simulate(law, Breather(ref_length=1.0, delta=0.8, period=1.0))
        assert abs(traj.net_displacement) <= 1e-9

    def test_stick_slip_wave(self):
        law = FrictionLaw(1.0, 1.0, 0, 0)
        w = SquareWave(ref_length=1.0, delta=0.2, epsilon=0.5, speed=1.0)
        traj = engine.simulate(law, w, dt=w.period / 400)
        assert abs(traj.net_displacement - (-0.1)) < 1e-6
        # the left end only moves while the wave enters
        dx = np.diff(traj.x1)
        dts = np.diff(traj.times)
        mids = 0.5 * (traj.times[:-1] + traj.times[1:])
        moving = np.abs(dx / dts) > 1e-12
        assert np.all(mids[moving] < 0.2 + 1e-9)
        rate = dx[moving] / dts[moving]
        assert np.allclose(rate, -0.5, atol=1e-12)

    def test_shape_consistency_every_sample(self):
        law = FrictionLaw(1.0, 0.5, 0.4, 0.2)
        w = SquareWave(ref_length=1.0, delta=0.3, epsilon=-0.4, speed=2.0)
        traj = engine.simulate(law, w, dt=w.period / 333)
        assert np.max(np.abs(traj.x2 - traj.x1 - traj.l)) <= 1e-12
        assert np.all(np.diff(traj.times) > 0.0)

    def test_periodic_additivity(self):
        law = FrictionLaw(0.75, 0.25, 0, 0)
        g = Breather(ref_length=1.0, delta=1.0, period=1.0)
        one = engine.simulate(law, g, n_periods=1).net_displacement
        three = engine.simulate(law, g, n_periods=3).net_displacement
        assert abs(three - 3.0 * one) < 1e-12

    def test_length_returns_each_period(self):
        law = FrictionLaw(1, 0.5, 1, 0.5)
        g = Breather(ref_length=1.0, delta=0.5, period=1.0)
        traj = engine.simulate(law, g, n_periods=2, dt=1.0 / 100)
        assert abs(traj.l[0] - traj.l[100]) < 1e-12
        assert abs(traj.l[0] - traj.l[-1]) < 1e-12

    def test_convergence_with_dt(self):
        law = FrictionLaw(2.0, 1.0, 3.0, 1.0)
        g = Breather(ref_length=1.0, delta=0.7, period=1.0)
        target = engine.cycle_displacement(law, g, dt=1.0 / 128).analytic_value
        errors = []
        for n in (125, 250, 500):
            traj = engine.simulate(law, g, dt=1.0 / n)
            errors.append(abs(traj.net_displacement - target))
        assert errors[2] < errors[0]
        order = math.log(errors[0] / errors[2]) / math.log(4.0)
        assert order >= 1.0

    def test_rate_independence_dry_and_newtonian(self):
        for law in (FrictionLaw(0.7, 0.3, 0, 0), FrictionLaw(0, 0, 4, 1)):
            d1 = engine.simulate(
                law, Breather(ref_length=1.0, delta=0.5, period=1.0)
            ).net_displacement
            d2 = engine.simulate(
                law, Breather(ref_length=1.0, delta=0.5, period=2.0)
            ).net_displacement
            assert abs(d1 - d2) <= 1e-9

    def test_rate_dependence_mixed_law(self):
        law = FrictionLaw(1.0, 0.5, 1.0, 0.5)
        d1 = engine.simulate(
            law, Breather(ref_length=1.0, delta=0.5, period=1.0)
        ).net_displacement
        d2 = engine.simulate(
            law, Breather(ref_length=1.0, delta=0.5, period=0.5)
        ).net_displacement
        assert abs(d1 - d2) > 1e-3

    def test_start_position_offsets_whole_trajectory(self):
        law = FrictionLaw(0.75, 0.25, 0, 0)
        g = Breather(ref_length=1.0, delta=1.0, period=1.0)
        a = engine.simulate(law, g, dt=0.01)
        b = engine.simulate(law, g, dt=0.01, x0=5.0)
        assert np.allclose(b.x1 - a.x1, 5.0, atol=1e-12)

    def test_invalid_arguments(self):
        law = FrictionLaw(1, 1, 0, 0)
        g = Breather(ref_length=1.0, delta=0.5, period=1.0)
        with pytest.raises(ValueError):
            engine.simulate(law, g, n_periods=0)
        with pytest.raises(ValueError):
            engine.simulate(law, g, dt=-0.1)


class TestCycleDisplacement:
    def test_stride_negative_case(self):
        law = FrictionLaw(0.5, 0.5, 0, 0)
        g = CompositeStride(lam=0.1, delta=1.0, h=2.0)
        rep = engine.cycle_displacement(law, g)
        assert abs(rep.net_displacement - (-0.5)) < 1e-6
        assert rep.abs_residual <= 1e-6

    def test_sliding_wave_report(self):
        law = FrictionLaw(0, 0, 1, 1)
        g = SquareWave(ref_length=1.0, delta=0.25, epsilon=1.0, speed=1.0)
        rep = engine.cycle_displacement(law, g)
        assert rep.admissibility is not None and rep.admissibility.regime == "sliding"
        expected = newtonian_sliding_displacement(1.0, 1.0, 0.25, 1.0)
        assert abs(rep.net_displacement - expected) < 1e-6
        labels = [k for k, _ in rep.contributions]
        assert labels == ["wave_enter", "wave_inside", "wave_exit"]

    def test_infeasible_wave_still_runs(self):
        # sliding requires delta below 1/3 here; request a much wider wave
        law = FrictionLaw(1, 0, 1, 1)
        g = SquareWave(ref_length=1.0, delta=0.9, epsilon=1.0, speed=1.0)
        rep = engine.cycle_displacement(law, g, dt=g.period / 200)
        assert rep.admissibility.regime == "infeasible"
        assert rep.analytic_value is None
        assert math.isfinite(rep.net_displacement)
        assert "note" in rep.meta

    def test_mixed_rheology_stride_has_no_closed_form(self):
        law = FrictionLaw(1.0, 0.5, 1.0, 0.5)
        rep = engine.cycle_displacement(law, CompositeStride(lam=0.5, delta=0.5, h=2.0))
        assert rep.analytic_value is None
        assert "simulate" in rep.meta["note"]
        assert rep.meta["edge_parameterization"]

    def test_generic_path_without_closed_form(self):
        law = FrictionLaw(1.0, 0.5, 0, 0)
        path = TwoSegmentPath(
            ref_length=1.0,
            split=0.5,
            times=(0.0, 0.4, 1.0),
            l1=(0.4, 0.6, 0.4),
            l2=(0.5, 0.55, 0.5),
        )
        rep = engine.cycle_displacement(law, path, dt=0.01)
        assert rep.analytic_value is None
        assert math.isfinite(rep.net_displacement)

    def test_bingham_breather_quadrature_reference(self):
        law = FrictionLaw(2.0, 1.0, 3.0, 1.0)
        rep = engine.cycle_displacement(law, Breather(ref_length=1.0, delta=0.7, period=1.0))
        assert rep.analytic_value is not None
        assert rep.rel_residual < 1e-6


class TestVerify:
    def test_breather_pass(self):
        law = FrictionLaw(0.75, 0.25, 0, 0)
        rep = engine.verify(law, Breather(ref_length=1.0, delta=1.0, period=1.0), tol=1e-6)
        assert rep.passed

    def test_sliding_wave_includes_stage_checks(self):
        law = FrictionLaw(0, 0, 1, 1)
        g = SquareWave(ref_length=1.0, delta=0.25, epsilon=1.0, speed=1.0)
        rep = engine.verify(law, g, tol=1e-6)
        names = [c.name for c in rep.checks]
        assert "stage:wave_inside" in names
        assert "stage_identity_exit_minus_enter" in names
        assert rep.passed

    def test_stride_includes_edge_checks(self):
        law = FrictionLaw(0.6, 0.4, 0, 0)
        rep = engine.verify(law, CompositeStride(lam=0.5, delta=0.5, h=2.0), tol=1e-6)
        assert sum(c.name.startswith("edge:") for c in rep.checks) == 4
        assert rep.passed

    def test_negative_control_fails(self):
        law = FrictionLaw(0.75, 0.25, 0, 0)
        g = Breather(ref_length=1.0, delta=1.0, period=1.0)
        rep = engine.verify(law, g, tol=1e-12)  # tighter than the integrator error
        assert not rep.passed
        assert rep.checks[0].residual > 0.0

    def test_unsupported_pair(self):
        law = FrictionLaw(1.0, 0.5, 1.0, 0.5)
        with pytest.raises(UnsupportedPairError):
            engine.verify(law, CompositeStride(lam=0.5, delta=0.5, h=2.0))


class TestSweep:
    def test_grid_order_and_values(self):
        law = FrictionLaw(1.0, 1.0, 0, 0)
        g = SquareWave(ref_length=1.0, delta=0.1, epsilon=0.5, speed=1.0)
        rows = engine.sweep(
            law,
            g,
            axes=[("gait.epsilon", (0.25, 0.5)), ("gait.delta", (0.05, 0.1))],
            dt=g.period / 100,
        )
        assert [r.index for r in rows] == [0, 1, 2, 3]
        assert rows[1].params == (("gait.epsilon", 0.25), ("gait.delta", 0.1))
        for r in rows:
            eps = dict(r.params)["gait.epsilon"]
            delta = dict(r.params)["gait.delta"]
            assert abs(r.report.net_displacement - (-eps * delta)) < 1e-6

    def test_errors_captured_per_row(self):
        law = FrictionLaw(1.0, 1.0, 0, 0)
        g = SquareWave(ref_length=1.0, delta=0.1, epsilon=0.5, speed=1.0)
        rows = engine.sweep(law, g, axes=[("gait.delta", (0.1, 2.0))])  # 2.0 > L invalid
        assert rows[0].error is None
        assert rows[1].report is None and "ValueError" in rows[1].error

    def test_law_axis(self):
        law = FrictionLaw(0.75, 0.25, 0, 0)
        g = Breather(ref_length=1.0, delta=1.0, period=1.0)
        rows = engine.sweep(law, g, axes=[("law.tau_minus", (0.6, 0.75))], dt=0.01)
        assert all(r.error is None for r in rows)
        assert rows[0].report.net_displacement != rows[1].report.net_displacement

    def test_parallel_matches_serial(self):
        law = FrictionLaw(1.0, 1.0, 0, 0)
        g = SquareWave(ref_length=1.0, delta=0.1, epsilon=0.5, speed=1.0)
        axes = [("gait.epsilon", (0.2, 0.4, 0.6))]
        serial = engine.sweep(law, g, axes, dt=g.period / 50, workers=1)
        parallel = engine.sweep(law, g, axes, dt=g.period / 50, workers=4)
        assert [r.report.net_displacement for r in serial] == [
            r.report.net_displacement for r in parallel
        ]

    def test_empty_axes_single_row(self):
        law = FrictionLaw(0.75, 0.25, 0, 0)
        g = Breather(ref_length=1.0, delta=1.0, period=1.0)
        rows = engine.sweep(law, g, axes=[], dt=0.01)
        assert len(rows) == 1 and rows[0].params == ()

    def test_bad_axis_path(self):
        law = FrictionLaw(1, 1, 0, 0)
        g = Breather(ref_length=1.0, delta=0.5, period=1.0)
        with pytest.raises(ValueError):
            engine.sweep(law, g, axes=[("delta", (0.1,))])


class TestFigureData:
    def test_fig6_spot_values(self):
        rows = engine.figure6_data(alphas=(0.5,), epsilons=(0.5, -0.5, 0.0))
        values = {eps: v for _, eps, v in rows}
        assert math.isclose(values[0.5], -0.2, rel_tol=1e-12)
        assert math.isclose(values[-0.5], 1.0 / 3.0, rel_tol=1e-12)
        assert values[0.0] == 0.0

    def test_fig6_default_three_curves(self):
        rows = engine.figure6_data()
        assert {a for a, _, _ in rows} == {0.25, 0.5, 0.75}
        for a, eps, v in rows:
            if eps > 0:
                assert v < 0.0
            elif eps < 0:
                assert v > 0.0

    def test_fig6_matches_formula(self):
        for a, eps, v in engine.figure6_data(alphas=(0.3, 0.8), epsilons=(0.7, -0.2)):
            assert math.isclose(v, stickslip_max_displacement_dry(a, eps, 1.0), rel_tol=1e-14)

    def test_fig7_default_five_curves(self):
        rows = engine.figure7_data()
        assert len({b2 for _, b2, _, _ in rows}) == 5
        for b, b2, eps, v in rows:
            if b >= 1.0 and eps > 0.0:
                assert v > 0.0

    def test_fig7_collapse_limit(self):
        rows = engine.figure7_data(epsilons=(-0.9999,))
        for _, _, _, v in rows:
            assert abs(v - 0.25) < 1e-3

    def test_fig7_ratio_below_one_dips_negative(self):
        rows = engine.figure7_data(
            betas=(0.5,), epsilons=tuple(k / 20 for k in range(1, 20))
        )
        assert min(v for _, _, _, v in rows) < 0.0

    def test_domain_checks(self):
        with pytest.raises(ValueError):
            engine.figure6_data(epsilons=(-1.5,))
        with pytest.raises(ValueError):
            engine.figure7_data(delta_over_length=1.5)


class TestScaleInvariance:
    def test_simulated_displacement_invariant_under_law_scaling(self):
        law = FrictionLaw(2.0, 1.0, 3.0, 1.0)
        g = Breather(ref_length=1.0, delta=0.7, period=1.0)
        d1 = engine.simulate(law, g, dt=0.01).net_displacement
        d2 = engine.simulate(scale(law, 7.3), g, dt=0.01).net_displacement
        assert math.isclose(d1, d2, rel_tol=1e-12)


class TestConstantLengthReduction:
    def test_tracks_first_segment_breather(self):
        for law in (
            FrictionLaw(0.75, 0.25, 0, 0),
            FrictionLaw(0, 0, 4, 1),
            FrictionLaw(2, 1, 3, 1),
        ):
            cl = ConstantLength(ref_length=1.0, split=0.5, seg1_rest=0.4, delta=0.3, period=1.0)
            br = Breather(ref_length=0.4, delta=0.3, period=1.0)
            t1 = engine.simulate(law, cl, dt=1.0 / 200)
            t2 = engine.simulate(law, br, dt=1.0 / 200)
            assert np.max(np.abs(t1.x1 - t2.x1)) <= 1e-9


class TestSweepWorkerEnv:
    def test_env_var_controls_workers(self, monkeypatch):
        monkeypatch.setenv("DIRCRAWL_SWEEP_WORKERS", "3")
        law = FrictionLaw(1.0, 1.0, 0, 0)
        g = SquareWave(ref_length=1.0, delta=0.1, epsilon=0.5, speed=1.0)
        rows = engine.sweep(law, g, axes=[("gait.epsilon", (0.2, 0.4))], dt=g.period / 50)
        assert [r.index for r in rows] == [0, 1]
        serial = engine.sweep(
            law, g, axes=[("gait.epsilon", (0.2, 0.4))], dt=g.period / 50, workers=1
        )
        assert [r.report.net_displacement for r in rows] == [
            r.report.net_displacement for r in serial
        ]


class TestCustomProfileGait:
    def test_engine_handles_profile_without_corner_hints(self):
        # a skewed two-hump profile; sign changes discovered by scanning
        law = FrictionLaw(0.75, 0.25, 0, 0)

        def profile(t):
            return 1.0 + 0.3 * math.sin(math.pi * t) ** 2 + 0.2 * math.sin(2 * math.pi * t) ** 2

        def profile_rate(t):
            return 0.3 * math.pi * math.sin(2 * math.pi * t) + 0.4 * math.pi * math.sin(
                4 * math.pi * t
            )

        gait = Breather(
            ref_length=1.0, delta=0.3, period=1.0, profile=profile, profile_rate=profile_rate
        )
        rep = engine.cycle_displacement(law, gait, dt=1.0 / 4000)
        assert rep.analytic_value is not None
        assert rep.rel_residual < 1e-5


class TestWaveConvergence:
    def test_sliding_wave_error_shrinks_with_dt(self):
        law = FrictionLaw(0, 0, 1, 1)
        g = SquareWave(ref_length=1.0, delta=0.25, epsilon=1.0, speed=1.0)
        target = sliding_cycle_displacement(law, 1.0, 1.0, 0.25, 1.0).total
        errors = []
        for n in (50, 100, 200):
            traj = engine.simulate(law, g, dt=g.period / n)
            errors.append(abs(traj.net_displacement - target))
        assert errors[2] < errors[0]
        order = math.log(errors[0] / errors[2]) / math.log(4.0)
        assert order >= 1.0


class TestScaledUnits:
    def test_wave_in_non_unit_units(self):
        # nothing in the model assumes unit length or unit speed
        law = FrictionLaw(0.4, 0.6, 0.0, 0.0)
        L, c, eps = 1.7, 2.3, 0.8
        dmax = stickslip_delta_max(law, eps, c, L)
        gait = SquareWave(ref_length=L, delta=0.9 * dmax, epsilon=eps, speed=c)
        rep = engine.cycle_displacement(law, gait, dt=gait.period / 64)
        assert abs(rep.net_displacement - (-eps * 0.9 * dmax)) < 1e-9

    def test_large_amplitude_extension_wave(self):
        law = FrictionLaw(0.5, 0.5, 0.0, 0.0)
        eps = 1.5
        dmax = stickslip_delta_max(law, eps, 1.0, 1.0)
        gait = SquareWave(ref_length=1.0, delta=dmax, epsilon=eps, speed=1.0)
        rep = engine.cycle_displacement(law, gait, dt=gait.period / 64)
        assert abs(rep.net_displacement - stickslip_max_displacement_dry(0.5, eps, 1.0)) < 1e-9

    def test_sliding_wave_speed_invariance_newtonian(self):
        # with no yield forces the per-cycle displacement cannot depend on speed
        law = FrictionLaw(0, 0, 2.0, 1.0)
        vals = []
        for c in (0.5, 1.0, 4.0):
            vals.append(
                sliding_cycle_displacement(law, 0.7, c, 0.3, 1.0).total
            )
        assert max(vals) - min(vals) < 1e-14


class TestEmptyGrid:
    def test_axis_with_no_values_yields_empty_table(self):
        law = FrictionLaw(0.75, 0.25, 0, 0)
        g = Breather(ref_length=1.0, delta=1.0, period=1.0)
        assert engine.sweep(law, g, axes=[("gait.delta", ())]) == []


class TestRandomizedWaveOracle:
    def test_random_sliding_configurations_match_closed_form(self):
        import random as _random

        from dircrawl.analytic import sliding_delta_max, wave_admissibility

        rng = _random.Random(90125)
        checked = 0
        while checked < 20:
            extension = rng.random() < 0.5
            eps = rng.uniform(0.1, 0.9) * (1.0 if extension else -1.0)
            if extension:
                law = FrictionLaw(rng.uniform(0.0, 1.0), 0.0, rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0))
            else:
                law = FrictionLaw(0.0, rng.uniform(0.0, 1.0), rng.uniform(0.1, 2.0), rng.uniform(0.1, 2.0))
            c = rng.uniform(0.5, 2.0)
            bound = sliding_delta_max(law, eps, c, 1.0)
            if bound < 0.02:
                continue
            delta = rng.uniform(0.2, 0.8) * bound
            assert wave_admissibility(law, eps, c, delta, 1.0).regime == "sliding"
            expected = sliding_cycle_displacement(law, eps, c, delta, 1.0).total
            gait = SquareWave(ref_length=1.0, delta=delta, epsilon=eps, speed=c)
            traj = engine.simulate(law, gait, dt=gait.period / 800)
            assert abs(traj.net_displacement - expected) <= 1e-6 * max(1.0, abs(expected))
            checked += 1

    def test_random_stick_slip_configurations_match_closed_form(self):
        import random as _random

        rng = _random.Random(5150)
        checked = 0
        while checked < 20:
            eps = rng.uniform(0.1, 0.9) * rng.choice([-1.0, 1.0])
            law = FrictionLaw(
                rng.uniform(0.05, 2.0), rng.uniform(0.05, 2.0),
                rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0),
            )
            c = rng.uniform(0.5, 2.0)
            dmax = stickslip_delta_max(law, eps, c, 1.0)
            if dmax < 0.02:
                continue
            delta = rng.uniform(0.2, 1.0) * dmax
            gait = SquareWave(ref_length=1.0, delta=delta, epsilon=eps, speed=c)
            traj = engine.simulate(law, gait, dt=gait.period / 64)
            assert abs(traj.net_displacement - (-eps * delta)) <= 1e-9
            checked += 1


class TestVerifyAcrossFamilies:
    def test_random_supported_pairs_verify(self):
        import random as _random

        rng = _random.Random(2112)
        for _ in range(4):
            bing = FrictionLaw(
                rng.uniform(0.1, 2), rng.uniform(0.1, 2), rng.uniform(0.1, 2), rng.uniform(0.1, 2)
            )
            assert engine.verify(
                bing, Breather(ref_length=1.0, delta=rng.uniform(0.2, 0.8), period=1.0)
            ).passed
            assert engine.verify(
                bing,
                ConstantLength(
                    ref_length=1.0, split=0.5, seg1_rest=0.4, delta=0.2, period=1.0
                ),
            ).passed
            dry = FrictionLaw(rng.uniform(0.1, 2), rng.uniform(0.1, 2), 0, 0)
            assert engine.verify(
                dry, CompositeStride(lam=rng.uniform(0.2, 1.0), delta=rng.uniform(0.2, 1.0), h=2.0)
            ).passed


class TestNearDegenerateWaveWidth:
    def test_wave_nearly_as_wide_as_body(self):
        law = FrictionLaw(0, 0, 2.0, 1.0)  # Newtonian: any width below L slides
        gait = SquareWave(ref_length=1.0, delta=0.999, epsilon=0.5, speed=1.0)
        expected = sliding_cycle_displacement(law, 0.5, 1.0, 0.999, 1.0).total
        traj = engine.simulate(law, gait, dt=gait.period / 800)
        assert abs(traj.net_displacement - expected) <= 1e-6 * max(1.0, abs(expected))


class TestContractionStickSlip:
    def test_left_end_advances_only_while_wave_enters(self):
        law = FrictionLaw(1.0, 1.0, 0.0, 0.0)
        eps = -0.5
        w = SquareWave(ref_length=1.0, delta=0.2, epsilon=eps, speed=1.0)
        traj = engine.simulate(law, w, dt=w.period / 400)
        dx = np.diff(traj.x1)
        dts = np.diff(traj.times)
        mids = 0.5 * (traj.times[:-1] + traj.times[1:])
        moving = np.abs(dx / dts) > 1e-12
        assert np.all(mids[moving] < 0.2 + 1e-9)
        assert np.allclose(dx[moving] / dts[moving], -eps, atol=1e-12)  # advances
        assert abs(traj.net_displacement - 0.1) < 1e-9
