"""Massiveness machinery: shells, Wiener sums, thorn rules, hyperplanes."""

import itertools

import numpy as np
import pytest

from subwalk import (
    AxisSet,
    BallSet,
    ConeSet,
    CylinderSet,
    DomainError,
    ExplicitSet,
    HyperplaneSet,
    LinOverLogThorn,
    LinearThorn,
    PowerThorn,
    TableThorn,
    ThornSet,
    chi_profile,
    fat_thorn_rule,
    hyperplane_return_sum,
    power_alpha,
    shell,
    thorn_series_terms,
    wiener_test,
)

# frozen one-dimensional return-rate integrals on Z^3
I_ALPHA1_EPS2 = 4.671524117714365     # alpha=1, eps=1e-2
I_ALPHA1_EPS3 = 6.466843957417189     # alpha=1, eps=1e-3
I_ALPHA05_EPS6 = 1.8463365069654716   # alpha=0.5, eps=1e-6


def brute_shell(setspec, k, bound=40):
    """Reference shell enumeration by scanning a cube of side 2*bound."""
    lo, hi = -bound, bound
    pts = np.array(list(itertools.product(range(lo, hi + 1), repeat=3)))
    r2 = (pts ** 2).sum(axis=1)
    ann = (r2 >= 4 ** k) & (r2 < 4 ** (k + 1))
    member = setspec.member(pts)
    return {tuple(p) for p in pts[ann & member]}


class TestShellEnumeration:
    @pytest.mark.parametrize("setspec", [
        AxisSet(), HyperplaneSet(), BallSet(9), ConeSet(1.0),
        ThornSet(PowerThorn(0.5)), CylinderSet(16, 2),
    ])
    def test_matches_brute_force(self, setspec):
        for k in (1, 2, 3):
            got = {tuple(p) for p in shell(setspec, k).points}
            want = brute_shell(setspec, k, bound=17)
            assert got == want

    def test_axis_shell_sizes(self):
        for k in range(1, 8):
            assert shell(AxisSet(), k).n == 2 ** k

    def test_explicit_set_membership(self):
        from subwalk import point_set
        es = ExplicitSet(point_set([(4, 0, 0), (5, 1, 0), (40, 0, 0)]))
        got = {tuple(p) for p in shell(es, 2).points}
        assert got == {(4, 0, 0), (5, 1, 0)}


class TestChiProfile:
    def test_power_family_closed_form(self):
        prof = chi_profile(power_alpha(1.0), 3)
        assert prof.chi(2.0) / prof.chi(1.0) == pytest.approx(4.0, rel=1e-12)
        assert prof.doubling_constant == pytest.approx(2.0 ** 2, rel=1e-6)
        assert not prof.experimental

    def test_alpha_grid(self):
        for a in (0.5, 1.5):
            prof = chi_profile(power_alpha(a), 3)
            assert prof.doubling_constant == pytest.approx(2 ** (3 - a), rel=1e-6)


class TestWienerTest:
    def test_axis_converges(self, ev1):
        rep = wiener_test(ev1, AxisSet(), range(1, 7))
        assert rep.verdict == "ConvergesLikely"
        terms = [r.term for r in rep.rows]
        # capacity of a dyadic axis segment grows linearly, chi like 4^k
        assert all(b < a for a, b in zip(terms, terms[1:]))

    def test_cone_diverges(self, ev1):
        rep = wiener_test(ev1, ConeSet(1.0), range(1, 5))
        assert rep.verdict == "DivergesLikely"
        terms = [r.term for r in rep.rows]
        assert max(terms) / min(terms) < 2.0

    def test_subsampling_flags_lower_bound(self, ev1):
        rep = wiener_test(ev1, ConeSet(1.0), range(4, 6), budget_points=4000)
        assert any(r.subsampled for r in rep.rows)
        assert any("lower bound" in f for f in rep.flags)

    def test_report_serialization(self, ev1, tmp_path):
        import json
        rep = wiener_test(ev1, AxisSet(), range(1, 5))
        doc = json.loads(rep.to_json())
        assert doc["verdict"] == rep.verdict
        assert len(doc["rows"]) == 4
        out = tmp_path / "rep.csv"
        rep.to_csv(out)
        assert out.read_text().splitlines()[0].startswith("k,")


class TestThornSeries:
    def test_lin_over_log_threshold(self):
        # threshold beta = 1/(d - alpha - 1) = 1 at d=3, alpha=1
        assert thorn_series_terms(
            LinOverLogThorn(1.0), 3, 1.0, range(1, 30)).verdict == "Massive"
        assert thorn_series_terms(
            LinOverLogThorn(0.5), 3, 1.0, range(1, 30)).verdict == "Massive"
        assert thorn_series_terms(
            LinOverLogThorn(2.0), 3, 1.0, range(1, 30)).verdict == "NonMassive"

    def test_power_profile_always_non_massive(self):
        for gamma in (0.25, 0.5, 0.9):
            res = thorn_series_terms(PowerThorn(gamma), 3, 1.0, range(1, 30))
            assert res.verdict == "NonMassive"

    def test_terms_follow_profile(self):
        res = thorn_series_terms(PowerThorn(0.5), 3, 1.0, range(1, 10))
        want = 2.0 ** (-0.5 * res.n_range)
        np.testing.assert_allclose(res.terms, want, rtol=1e-12)

    def test_fat_profile_rejected(self):
        with pytest.raises(DomainError):
            thorn_series_terms(LinearThorn(0.5), 3, 1.0, range(1, 10))

    def test_exponent_domain_guard(self):
        # d - alpha - 1 <= 0 leaves no thin-thorn dichotomy
        with pytest.raises(DomainError):
            thorn_series_terms(PowerThorn(0.5), 3, 2.0, range(1, 10))

    def test_table_profile_classified(self):
        n = np.arange(1, 2 ** 12)
        res = thorn_series_terms(
            TableThorn(np.sqrt(n)), 3, 1.0, range(1, 12))
        assert res.verdict in ("NonMassive", "Inconclusive")


class TestFatThorn:
    def test_linear_profile_massive(self):
        rep = fat_thorn_rule(LinearThorn(0.5), 3, 1.5)
        assert rep.verdict == "Massive"
        assert len(rep.witnesses) > 0

    def test_witness_balls_inscribed(self):
        rep = fat_thorn_rule(LinearThorn(0.5), 3, 1.5)
        thorn = ThornSet(LinearThorn(0.5))
        for k, height, radius in rep.witnesses[:4]:
            r = int(radius)
            offs = [(dx, dy, dz)
                    for dx in (-r, 0, r)
                    for dy in (-r, 0, r)
                    for dz in (-r, 0, r)
                    if dx * dx + dy * dy + dz * dz <= r * r]
            pts = np.array([(height + dx, dy, dz) for dx, dy, dz in offs])
            assert thorn.member(pts).all()
            # the whole witness ball sits inside dyadic shell k
            r2 = (pts ** 2).sum(axis=1)
            assert np.all((r2 >= 4 ** k) & (r2 < 4 ** (k + 1)))

    def test_thin_profile_rejected(self):
        with pytest.raises(DomainError):
            fat_thorn_rule(PowerThorn(0.5), 3, 1.5)


class TestHyperplane:
    def test_frozen_values(self):
        res = hyperplane_return_sum(3, 1.0, [1e-2, 1e-3])
        by_eps = {eps: val for eps, val in res.rows}
        assert by_eps[1e-2] == pytest.approx(I_ALPHA1_EPS2, rel=1e-10)
        assert by_eps[1e-3] == pytest.approx(I_ALPHA1_EPS3, rel=1e-10)

    def test_dichotomy_classifications(self):
        lo = hyperplane_return_sum(3, 0.5, [1e-4, 1e-6])
        assert lo.classification.startswith("non-massive")
        hi = hyperplane_return_sum(3, 1.5, [1e-4, 1e-6])
        assert hi.classification.startswith("massive")

    def test_alpha_one_log_growth_rate(self):
        res = hyperplane_return_sum(3, 1.0, [1e-3, 1e-4, 1e-5, 1e-6])
        # I(eps) ~ (sqrt(2 d)/pi) ln(1/eps): increment per decade
        want = np.sqrt(6.0) / np.pi * np.log(10.0)
        assert res.growth_per_decade == pytest.approx(want, rel=0.01)

    def test_alpha_half_bounded(self):
        res = hyperplane_return_sum(3, 0.5, [1e-5, 1e-6])
        vals = [v for _, v in res.rows]
        assert max(vals) == pytest.approx(I_ALPHA05_EPS6, rel=1e-8)
        assert max(vals) - min(vals) < 0.01


class TestSetGeometry:
    def test_hyperplane_coordinate_choice(self):
        hp = HyperplaneSet(coordinate=1)
        pts = np.array([[5, 0, 2], [5, 1, 2]])
        mask = hp.member(pts)
        assert mask.tolist() == [True, False]

    def test_ball_set_member(self):
        b = BallSet(3)
        pts = np.array([[3, 0, 0], [2, 2, 0], [4, 0, 0]])
        assert b.member(pts).tolist() == [True, True, False]

    def test_thorn_needs_positive_height(self):
        t = ThornSet(PowerThorn(0.5))
        pts = np.array([[-4, 0, 0], [4, 0, 0], [4, 2, 0], [4, 3, 0]])
        got = t.member(pts).tolist()
        assert got == [False, True, True, False]
