"""Monte Carlo corroboration tests: samplers, estimates, determinism."""

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from subwalk import (
    AxisSet,
    BallSet,
    ConeSet,
    DomainError,
    EscapeRadius,
    ExplicitSet,
    Horizon,
    HyperplaneSet,
    IncrementSampler,
    SimConfig,
    ThornSet,
    PowerThorn,
    coefficients,
    hitting_probability,
    massiveness_trend,
    point_set,
    power_alpha,
    sample_increment,
    simulate_step,
    standoff_point,
    wilson_interval,
)


class TestIncrementSampler:
    def test_matches_coefficient_law(self):
        co = coefficients(power_alpha(1.0), 512)
        rng = np.random.default_rng(42)
        draws = sample_increment(co, rng, size=200_000)
        freq1 = np.mean(draws == 1)
        freq2 = np.mean(draws == 2)
        assert freq1 == pytest.approx(0.5, abs=0.004)
        assert freq2 == pytest.approx(0.125, abs=0.003)

    def test_tail_exponent(self):
        # P(tau > n) ~ n^{-alpha/2}: compare two dyadic tail counts
        co = coefficients(power_alpha(1.0), 256)
        rng = np.random.default_rng(7)
        draws = sample_increment(co, rng, size=400_000)
        p_hi = np.mean(draws > 20_000)
        p_lo = np.mean(draws > 5_000)
        assert p_lo / p_hi == pytest.approx(2.0, rel=0.15)

    def test_cap_masks_extreme_draws(self):
        co = coefficients(power_alpha(0.2), 64)
        sampler = IncrementSampler(co, cap=10_000)
        rng = np.random.default_rng(3)
        k, r_float, capped = sampler.draw(rng, 20_000)
        assert capped.any()
        assert np.all(k[capped] == 10_000)
        assert np.all(r_float[capped] > 10_000)
        assert np.all(k >= 1)

    def test_single_draw_scalar(self):
        co = coefficients(power_alpha(1.0), 64)
        rng = np.random.default_rng(0)
        v = sample_increment(co, rng)
        assert isinstance(v, int) and v >= 1


class TestSimulateStep:
    def test_exact_small_step_distribution(self):
        rng = np.random.default_rng(11)
        out = np.array([simulate_step((0, 0, 0), 1, rng)
                        for _ in range(20_000)])
        assert np.all(np.abs(out).sum(axis=1) == 1)
        freq = np.mean(out[:, 0] == 1)
        assert freq == pytest.approx(1 / 6, abs=0.01)

    def test_parity_and_spread_of_long_increments(self):
        # R base steps shift the coordinate-sum parity by R exactly
        rng = np.random.default_rng(5)
        R = 10 ** 7
        out = np.array([simulate_step((0, 0, 0), R, rng)
                        for _ in range(2_000)])
        assert np.all((out.sum(axis=1) - R) % 2 == 0)
        spread = np.sqrt((out.astype(float) ** 2).sum(axis=1).mean())
        assert spread == pytest.approx(np.sqrt(R), rel=0.05)


class TestWilson:
    def test_reference_value(self):
        lo, hi = wilson_interval(50, 100)
        assert lo == pytest.approx(0.4038, abs=2e-4)
        assert hi == pytest.approx(0.5962, abs=2e-4)

    def test_edge_cases(self):
        lo, hi = wilson_interval(0, 50)
        assert lo == 0.0 and 0.0 < hi < 0.15
        lo, hi = wilson_interval(50, 50)
        assert 0.85 < lo < 1.0 and hi == 1.0


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 1000), st.integers(1, 1000))
def test_wilson_orders_and_brackets(hits, trials):
    hits = min(hits, trials)
    lo, hi = wilson_interval(hits, trials)
    p = hits / trials
    assert 0.0 <= lo <= p <= hi <= 1.0


class TestHittingProbability:
    def test_single_point_matches_green_ratio(self, ev1):
        target = ExplicitSet(point_set([(0, 0, 0)]))
        cfg = SimConfig(d=3, spec=power_alpha(1.0), start=(4, 0, 0),
                        trials=20_000, stopping=EscapeRadius(64),
                        master_seed=101)
        est = hitting_probability(cfg, target, evaluator=ev1)
        want = ev1.green_full((4, 0, 0)).value / ev1.g0_full()
        se = np.sqrt(want * (1 - want) / cfg.trials)
        assert abs(est.point_estimate - want) <= 3 * se + est.return_bound

    def test_start_inside_short_circuit(self):
        cfg = SimConfig(d=3, spec=power_alpha(1.0), start=(0, 2, 0),
                        trials=500, stopping=Horizon(10), master_seed=1)
        est = hitting_probability(cfg, BallSet(3))
        assert est.point_estimate == 1.0
        assert est.hits == 500

    def test_deterministic_given_seed(self):
        cfg = SimConfig(d=3, spec=power_alpha(1.5), start=(0, 0, 6),
                        trials=2_000, stopping=Horizon(20_000), master_seed=99)
        a = hitting_probability(cfg, HyperplaneSet())
        b = hitting_probability(cfg, HyperplaneSet())
        assert a == b

    def test_seed_changes_result(self):
        base = dict(d=3, spec=power_alpha(1.5), start=(0, 0, 6),
                    trials=2_000, stopping=Horizon(20_000))
        a = hitting_probability(SimConfig(master_seed=1, **base), HyperplaneSet())
        b = hitting_probability(SimConfig(master_seed=2, **base), HyperplaneSet())
        assert a.hits != b.hits

    def test_block_accounting(self):
        cfg = SimConfig(d=3, spec=power_alpha(1.0), start=(0, 10, 0),
                        trials=1_000, stopping=Horizon(5_000), master_seed=17)
        est = hitting_probability(cfg, AxisSet())
        assert est.hits + est.exhausted_trials == est.trials
        assert est.ci_low <= est.point_estimate <= est.ci_high
        assert "lower bound" in est.truncation_note

    def test_escape_reports_return_bound(self, ev1):
        cfg = SimConfig(d=3, spec=power_alpha(1.0), start=(9, 0, 0),
                        trials=400, stopping=EscapeRadius(48), master_seed=2)
        est = hitting_probability(cfg, BallSet(2), evaluator=ev1)
        assert est.return_bound is not None
        assert 0.0 < est.return_bound < 0.05

    def test_json_includes_run_description(self):
        cfg = SimConfig(d=3, spec=power_alpha(1.0), start=(5, 0, 0),
                        trials=200, stopping=Horizon(1_000), master_seed=8)
        est = hitting_probability(cfg, BallSet(2))
        doc = json.loads(est.to_json(set_name="ball:2", start=(5, 0, 0)))
        assert doc["hits"] == est.hits
        assert doc["seed"] == 8
        assert doc["set"] == "ball:2"


class TestStandoff:
    def test_geometry_by_set_kind(self):
        assert standoff_point(HyperplaneSet(), 7) == (0, 0, 7)
        assert standoff_point(HyperplaneSet(coordinate=0), 7) == (7, 0, 0)
        assert standoff_point(AxisSet(), 5) == (0, 5, 0)
        assert standoff_point(BallSet(3), 4) == (7, 0, 0)
        assert standoff_point(ThornSet(PowerThorn(0.5)), 6) == (-6, 0, 0)

    def test_point_is_outside_the_set(self):
        for spec in (HyperplaneSet(), AxisSet(), BallSet(3), ConeSet(1.0)):
            pt = np.array([standoff_point(spec, 9)])
            assert not spec.member(pt)[0]


class TestTrend:
    def test_requires_horizon_stopping(self):
        cfg = SimConfig(d=3, spec=power_alpha(1.0), start=(0, 0, 0),
                        trials=100, stopping=EscapeRadius(32), master_seed=1)
        with pytest.raises(DomainError):
            massiveness_trend(cfg, HyperplaneSet(), [4, 8])

    def test_requires_two_distances(self):
        cfg = SimConfig(d=3, spec=power_alpha(1.0), start=(0, 0, 0),
                        trials=100, stopping=Horizon(1_000), master_seed=1)
        with pytest.raises(DomainError):
            massiveness_trend(cfg, HyperplaneSet(), [4])

    def test_report_rows_cover_grid(self):
        cfg = SimConfig(d=3, spec=power_alpha(1.5), start=(0, 0, 0),
                        trials=400, stopping=Horizon(5_000), master_seed=6)
        rep = massiveness_trend(cfg, HyperplaneSet(), [4, 8])
        assert len(rep.rows) == 4
        assert rep.horizons == [5_000, 10_000]
        doc = json.loads(rep.to_json())
        assert doc["verdict"] == rep.verdict


class TestConfigValidation:
    def test_seed_range(self):
        with pytest.raises(DomainError):
            SimConfig(d=3, spec=power_alpha(1.0), start=(0, 0, 0),
                      trials=10, stopping=Horizon(10), master_seed=-1)

    def test_horizon_positive(self):
        with pytest.raises(DomainError):
            Horizon(0)

    def test_escape_radius_positive(self):
        with pytest.raises(DomainError):
            EscapeRadius(0)


class TestOppositeTrendsUnderBudget:
    def test_massive_thorn_gains_more_than_thin_one(self):
        """Budget response separates slowly massive from non-massive.

        The Wiener series for LinOverLog beta=0.5 diverges, so the
        hitting estimate keeps climbing as the horizon grows; beta=2
        converges and the estimate plateaus near its finite limit.
        """
        from subwalk import LinOverLogThorn
        gains = {}
        for beta in (0.5, 2.0):
            ests = []
            for H in (100_000, 1_600_000):
                cfg = SimConfig(d=3, spec=power_alpha(1.0), start=(-8, 0, 0),
                                trials=2_000, stopping=Horizon(H),
                                master_seed=23)
                est = hitting_probability(cfg, ThornSet(LinOverLogThorn(beta)))
                ests.append(est.point_estimate)
            gains[beta] = ests[1] - ests[0]
        assert gains[0.5] > 0.05
        assert gains[2.0] < 0.04
        assert gains[0.5] > 2.0 * max(gains[2.0], 0.0)
