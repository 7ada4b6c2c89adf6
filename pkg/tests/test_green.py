"""Green function tests against the independent Fourier-integral oracle.

The frozen literals below were produced by ``fourier_oracle`` (dyadic
Gauss-Legendre quadrature of 1/psi(1 - phihat) with a two-level
convergence check) and cross-checked against the closed form for the
simple walk at the origin.
"""

import numpy as np
import pytest

from subwalk import (
    BudgetError,
    asymptotic_constant,
    build_evaluators,
    fourier_oracle,
    power_alpha,
    riesz_constant,
    riesz_ratio_report,
)

# frozen oracle values on Z^3
G0_SIMPLE_WALK = 1.5163860591519780   # alpha=2, x=0, without the Dirac term: 0.516386...+1
G_ALPHA1_ZERO = 1.1153605839          # alpha=1, x=0, full
G_ALPHA1_500 = 0.0051435322572056606  # alpha=1, x=(5,0,0)
G_ALPHA1_1234 = 0.0007352267252112106   # alpha=1, x=(12,-3,4)
G_ALPHA2_1234 = 0.036746518479885394  # alpha=2, x=(12,-3,4)
C31 = 0.12409260002927854             # lim G(x) |x|^2 for alpha=1, d=3
A31 = 0.05066059182116889             # Riesz kernel amplitude, alpha=1, d=3


class TestFourierOracle:
    def test_simple_walk_watson_value(self):
        got = fourier_oracle(3, power_alpha(2.0), (0, 0, 0))
        assert got == pytest.approx(G0_SIMPLE_WALK, abs=5e-12)

    def test_alpha_one_zero_point(self):
        got = fourier_oracle(3, power_alpha(1.0), (0, 0, 0))
        assert got == pytest.approx(G_ALPHA1_ZERO, abs=1e-9)

    def test_oscillatory_points(self):
        assert fourier_oracle(3, power_alpha(1.0), (5, 0, 0)) == \
            pytest.approx(G_ALPHA1_500, rel=1e-10)
        assert fourier_oracle(3, power_alpha(2.0), (12, -3, 4)) == \
            pytest.approx(G_ALPHA2_1234, rel=1e-10)

    def test_symmetry_in_sign_and_axis(self):
        a = fourier_oracle(3, power_alpha(1.0), (3, 1, 0))
        b = fourier_oracle(3, power_alpha(1.0), (-3, 0, 1))
        assert a == pytest.approx(b, rel=1e-11)


class TestGreenAgainstOracle:
    def test_origin_both_alphas(self, evaluators):
        gv = evaluators[2.0].green_full((0, 0, 0))
        assert abs(gv.value - G0_SIMPLE_WALK) <= gv.bound
        assert gv.value == pytest.approx(G0_SIMPLE_WALK, abs=1e-3)
        gv = evaluators[1.0].green_full((0, 0, 0))
        assert abs(gv.value - G_ALPHA1_ZERO) <= gv.bound

    @pytest.mark.parametrize("x,frozen", [
        ((5, 0, 0), G_ALPHA1_500),
        ((12, -3, 4), G_ALPHA1_1234),
    ])
    def test_off_origin_alpha_one(self, ev1, x, frozen):
        gv = ev1.green(x)
        assert abs(gv.value - frozen) <= gv.bound
        assert gv.value == pytest.approx(frozen, rel=2e-4)

    def test_far_field_beyond_exact_box(self, ev1):
        x = (150, 0, 0)
        oracle = fourier_oracle(3, power_alpha(1.0), x)
        gv = ev1.green(x)
        assert abs(gv.value - oracle) <= gv.bound
        assert gv.value == pytest.approx(oracle, rel=2e-3)

    def test_parts_sum_to_value(self, ev1):
        gv = ev1.green((10, 5, 0))
        assert sum(gv.parts.values()) == pytest.approx(gv.value, rel=1e-12)

    def test_full_adds_dirac_only_at_zero(self, ev2):
        at0 = ev2.green_full((0, 0, 0))
        assert at0.parts["dirac"] == 1.0
        assert at0.value == pytest.approx(ev2.green((0, 0, 0)).value + 1.0)
        off = ev2.green_full((2, 0, 0))
        assert "dirac" not in off.parts


class TestAsymptoticConstants:
    def test_frozen_values(self):
        assert asymptotic_constant(3, 1.0) == pytest.approx(C31, rel=1e-12)
        assert riesz_constant(3, 1.0) == pytest.approx(A31, rel=1e-12)

    def test_ratio_identity(self):
        # A(d,a)/C(d,a) = (2d)^{-a/2} exactly, for several (d, a)
        for d, a in ((3, 1.0), (3, 1.5), (4, 1.0), (5, 0.5)):
            ratio = riesz_constant(d, a) / asymptotic_constant(d, a)
            assert ratio == pytest.approx((2 * d) ** (-a / 2), rel=1e-11)

    def test_report_flags_discrepancy(self):
        rep = riesz_ratio_report(3, 1.0)
        assert rep["discrepancy_flag"] is True
        assert rep["algebra_matches"] == "(2d)^(-alpha/2)"
        assert rep["(2/d)^(alpha/2)"] == pytest.approx(0.8164965809277260)
        assert rep["ratio_A_over_C"] == pytest.approx(0.4082482904638631)

    def test_inverse_square_law(self, ev1):
        for r in (40, 56, 80):
            gv = ev1.green((r, 0, 0))
            assert gv.value * r ** 2 == pytest.approx(C31, rel=0.01)

    def test_ratio_to_riesz_rows(self, ev1):
        rows = ev1.ratio_to_riesz([40, 60])
        for r, ratio in rows:
            assert ratio == pytest.approx((2 * 3) ** (-0.5), rel=0.02)


class TestErrorBudget:
    def test_bound_positive_and_small(self, ev1):
        for x in ((0, 0, 0), (7, 7, 0), (90, 0, 0)):
            gv = ev1.green(x)
            assert 0.0 < gv.bound < 0.05 * gv.value

    def test_split_point_invariance(self, small_evaluators):
        # moving the surrogate/tail split must stay inside the bounds
        ev = small_evaluators[1.0]
        for x in ((9, 0, 0), (20, 12, 4)):
            lo = ev.green(x, A=2.0)
            hi = ev.green(x, A=8.0)
            assert abs(lo.value - hi.value) <= lo.bound + hi.bound

    def test_budget_error_when_tolerance_unreachable(self):
        ev, = build_evaluators([power_alpha(1.0)], K1=64, box_radius=48,
                               n_renewal=1024, tolerance=1e-12)
        with pytest.raises(BudgetError):
            ev.green((40, 0, 0))


class TestBatchKernel:
    def test_matches_scalar_route(self, ev1):
        offsets = np.array([
            [0, 0, 0], [1, 0, 0], [5, 3, 1], [20, 0, 0],
            [0, 41, 0], [90, 2, 2], [150, 0, 0], [-7, 7, 7],
        ])
        got = ev1.kernel_values(offsets)
        for row, off in zip(got, offsets):
            want = ev1.green_full(tuple(off)).value
            assert row == pytest.approx(want, rel=5e-6)

    def test_origin_row_has_dirac(self, ev2):
        got = ev2.kernel_values(np.array([[0, 0, 0]]))
        assert got[0] == pytest.approx(ev2.g0_full(), rel=1e-12)

    def test_distance_guard(self, ev1):
        with pytest.raises(BudgetError):
            ev1.kernel_values(np.array([[2_000_000, 0, 0]]))


class TestEvaluatorMetadata:
    def test_alpha_property(self, evaluators):
        assert evaluators[1.0].alpha == 1.0
        assert evaluators[2.0].alpha == 2.0

    def test_g0_full_scalar(self, ev2):
        g0 = ev2.g0_full()
        assert isinstance(g0, float)
        assert g0 == pytest.approx(G0_SIMPLE_WALK, abs=1e-3)
