"""Monte Carlo corroboration of the analytic verdicts.

Simulation cannot prove massiveness (no finite horizon distinguishes
"hits forever" from "hits for a very long time"), but it can corroborate
the analytics in three graded ways, shown here:

  1. an exact identity it must reproduce: P_x(hit {0}) = G(x) / G(0),
     checked to Monte Carlo accuracy;
  2. a dichotomy it should echo: the hyperplane {x2 = 0} is massive for
     alpha >= 1 and non-massive below, visible as opposite trends of
     hitting estimates across start distances and budgets;
  3. a limit it should approach: cones are massive, so hitting
     estimates from a fixed start climb toward 1 as the horizon doubles.

Budget: a few minutes (the trend sweeps dominate).  All runs are
deterministic for a fixed master seed.
"""

import math

from subwalk import (ConeSet, EscapeRadius, ExplicitSet, Horizon,
                     HyperplaneSet, SimConfig, build_evaluator,
                     hitting_probability, massiveness_trend, point_set,
                     power_alpha, standoff_point)


def main():
    print("building evaluator (alpha = 1, d = 3) for the exact identity ...")
    ev1 = build_evaluator(power_alpha(1.0))

    print("\n1. single-point identity P_x(hit 0) = G(x)/G(0)")
    target = ExplicitSet(point_set([[0, 0, 0]]))
    cfg = SimConfig(d=3, spec=power_alpha(1.0), start=(5, 0, 0),
                    trials=100_000, stopping=EscapeRadius(64.0),
                    master_seed=101)
    est = hitting_probability(cfg, target, evaluator=ev1)
    exact = ev1.green((5, 0, 0)).value / ev1.g0_full()
    se = math.sqrt(exact * (1 - exact) / cfg.trials)
    print(f"   estimate {est.point_estimate:.6f} "
          f"[{est.ci_low:.6f}, {est.ci_high:.6f}]   "
          f"exact {exact:.6f}   deviation {abs(est.point_estimate - exact) / se:.2f} SE")
    print(f"   escape-stopping bias bound: {est.return_bound:.2e}")

    print("\n2. hyperplane dichotomy via trend sweeps "
          "(distances 8/16/32, horizon and 2x horizon)")
    for alpha in (1.5, 0.5):
        cfg_t = SimConfig(d=3, spec=power_alpha(alpha), start=(0, 0, 8),
                          trials=4000, stopping=Horizon(200_000),
                          master_seed=11)
        rep = massiveness_trend(cfg_t, HyperplaneSet(), [8, 16, 32])
        print(f"   alpha = {alpha}:")
        for D, H, e in rep.rows:
            print(f"     distance {D:>2}, horizon {H:>6}: "
                  f"{e.point_estimate:.3f} [{e.ci_low:.3f}, {e.ci_high:.3f}]")
        print(f"     verdict: {rep.verdict}")

    print("\n3. cone (slope 1) from distance 20: horizon doubling ladder")
    cone = ConeSet(slope=1.0)
    for H in (50_000, 100_000, 200_000, 400_000):
        cfg_c = SimConfig(d=3, spec=power_alpha(1.0),
                          start=standoff_point(cone, 20), trials=2000,
                          stopping=Horizon(H), master_seed=5)
        e = hitting_probability(cfg_c, cone)
        print(f"   horizon {H:>7}: estimate {e.point_estimate:.3f} "
              f"[{e.ci_low:.3f}, {e.ci_high:.3f}]")
    print("   climbing toward 1, as it must for a massive set; the "
          "estimates are lower bounds at every finite horizon")


if __name__ == "__main__":
    main()
