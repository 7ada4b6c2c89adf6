"""Capacity and equilibrium-measure tests.

Ground truths: the 1x1 solve equals 1/G0(0) by definition, and the three
solver routes (dense Cholesky, FFT-preconditioned CG, linear program)
must agree on the same point set.
"""

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from subwalk import (
    BudgetError,
    DomainError,
    PointSet,
    ball_capacity_scan,
    ball_points,
    capacity_variational,
    cylinder_points,
    dilate,
    equilibrium,
    green_matrix,
    halo_check,
    hitting_from_equilibrium,
    point_set,
    scaling_check,
)

FROZEN_CAP_SINGLE = {1.0: 0.8965710411768179, 2.0: 0.6594626645247047}


class TestSinglePoint:
    @pytest.mark.parametrize("alpha", [1.0, 2.0])
    def test_equals_inverse_green(self, evaluators, alpha):
        ev = evaluators[alpha]
        res = equilibrium(ev, point_set([(0, 0, 0)]))
        assert res.capacity == pytest.approx(1.0 / ev.g0_full(), rel=1e-14)
        assert res.capacity == pytest.approx(FROZEN_CAP_SINGLE[alpha], rel=1e-10)

    def test_translation_invariance(self, ev1):
        a = equilibrium(ev1, point_set([(0, 0, 0)])).capacity
        b = equilibrium(ev1, point_set([(7, -3, 2)])).capacity
        assert b == pytest.approx(a, rel=1e-12)


class TestSolverAgreement:
    @pytest.mark.parametrize("radius", [1, 2, 3])
    def test_dense_cg_lp_agree(self, ev1, radius):
        ps = ball_points(radius)
        dense = equilibrium(ev1, ps, method="dense")
        cg = equilibrium(ev1, ps, method="cg")
        lp = capacity_variational(ev1, ps)
        assert cg.capacity == pytest.approx(dense.capacity, rel=1e-8)
        assert lp.capacity == pytest.approx(dense.capacity, rel=1e-6)

    def test_auto_dispatch(self, ev1):
        small = equilibrium(ev1, ball_points(2))
        assert small.method == "dense"
        big = equilibrium(ev1, ball_points(12))
        assert big.method == "cg"
        assert big.n_points == len(ball_points(12).points)


class TestEquilibriumMeasure:
    def test_weights_nonnegative_and_sum(self, ev1):
        res = equilibrium(ev1, ball_points(3))
        assert np.all(res.rho >= 0.0)
        assert res.rho.sum() == pytest.approx(res.capacity, rel=1e-12)
        assert res.negative_min >= -1e-10

    def test_unit_potential_on_the_set(self, ev1):
        ps = ball_points(2)
        res = equilibrium(ev1, ps)
        G = green_matrix(ev1, ps)
        pot = G @ res.rho
        np.testing.assert_allclose(pot, 1.0, atol=1e-9)
        assert res.residual <= 1e-9

    def test_hitting_probability_decays_outside(self, ev1):
        ps = ball_points(2)
        res = equilibrium(ev1, ps)
        xs = [(3, 0, 0), (6, 0, 0), (12, 0, 0), (24, 0, 0)]
        h = hitting_from_equilibrium(ev1, ps, res, xs)
        assert np.all(np.diff(h) < 0.0)
        assert np.all((h > 0.0) & (h <= 1.0))

    def test_halo_maximum_principle(self, ev1):
        ps = ball_points(3)
        res = equilibrium(ev1, ps)
        peak = halo_check(ev1, ps, res)
        assert 0.0 < peak <= 1.0 + 1e-9


class TestMonotonicityAndSubadditivity:
    def test_monotone_under_inclusion(self, ev1):
        caps = [equilibrium(ev1, ball_points(r)).capacity for r in (1, 2, 3, 4)]
        assert all(b > a for a, b in zip(caps, caps[1:]))

    def test_subadditive_on_disjoint_union(self, ev1):
        a = ball_points(2, center=(0, 0, 0))
        b = ball_points(2, center=(20, 0, 0))
        union = point_set(np.vstack([a.points, b.points]))
        cap_u = equilibrium(ev1, union).capacity
        cap_a = equilibrium(ev1, a).capacity
        cap_b = equilibrium(ev1, b).capacity
        assert cap_u <= cap_a + cap_b
        assert cap_u > cap_a


class TestGeometry:
    def test_ball_point_counts(self):
        assert len(ball_points(1).points) == 7
        assert len(ball_points(2).points) == 33
        assert len(ball_points(4).points) == 257

    def test_cylinder_point_counts(self):
        ps = cylinder_points(2, 8)
        assert len(ps.points) == 13 * 8
        xs = ps.points[:, 0]
        assert xs.min() == 0 and xs.max() == 7

    def test_point_set_dedupe_and_order(self):
        ps = point_set([(1, 0, 0), (0, 0, 0), (1, 0, 0)])
        assert ps.n == 2
        assert ps.points[0].tolist() == [0, 0, 0]

    def test_dimension_guard(self):
        with pytest.raises(DomainError):
            point_set([(1, 0), (0, 0, 0)])

    def test_text_round_trip(self, tmp_path):
        ps = ball_points(2)
        path = tmp_path / "pts.txt"
        ps.to_text(path)
        back = PointSet.from_text(path)
        np.testing.assert_array_equal(back.points, ps.points)


class TestScaling:
    def test_dilate_contains_scaled_points(self):
        base = ball_points(2)
        big = dilate(base, 3)
        got = {tuple(p) for p in big.points}
        for p in base.points:
            assert tuple(3 * p) in got

    def test_sublattice_cg_matches_dense(self, ev1):
        # same set written on the doubled lattice 2 Z^3
        ps = point_set(2 * ball_points(2).points)
        dense = equilibrium(ev1, ps, method="dense")
        cg = equilibrium(ev1, ps, method="cg", scale=2)
        assert cg.capacity == pytest.approx(dense.capacity, rel=1e-8)

    def test_scaling_rows_grow_like_r_power(self, ev1):
        rows = scaling_check(ev1, ball_points(2), [1, 2, 3])
        ratios = [row[2] for row in rows]
        # Cap(sB)/s^{d-alpha} stabilizes as s grows
        assert max(ratios) / min(ratios) < 1.3


class TestReporting:
    def test_json_round_trip(self, ev1):
        res = equilibrium(ev1, ball_points(2))
        doc = json.loads(res.to_json())
        assert doc["capacity"] == pytest.approx(res.capacity)
        assert doc["method"] == "dense"
        assert doc["n_points"] == 33

    def test_ball_scan_shape(self, ev1):
        rows = ball_capacity_scan(ev1, [2, 4], method="dense")
        assert len(rows) == 2
        r, cap, ratio = rows[0]
        assert r == 2 and cap > 0 and ratio > 0


class TestBudgets:
    def test_lp_size_limit(self, ev1):
        with pytest.raises(BudgetError):
            capacity_variational(ev1, ball_points(8))


@settings(max_examples=10, deadline=None)
@given(st.sets(st.tuples(st.integers(-3, 3), st.integers(-3, 3),
                         st.integers(-3, 3)), min_size=1, max_size=12))
def test_capacity_bounds_for_arbitrary_small_sets(cached_ev1, pts):
    res = equilibrium(cached_ev1, point_set(sorted(pts)), method="dense")
    lo = 1.0 / cached_ev1.g0_full()
    assert lo - 1e-9 <= res.capacity <= len(pts) * lo + 1e-9


@pytest.fixture(scope="module")
def cached_ev1(evaluators):
    return evaluators[1.0]
