"""Capacities of lattice sets and their scaling laws.

The capacity of a finite set B is 1 / min energy, computed here by
solving (G rho) = 1 on B for the equilibrium measure rho; Cap(B) is
the total mass of rho.  Three scaling laws structure everything the
massiveness machinery does later:

  * a single point has Cap({0}) = 1/G(0);
  * a ball of radius r has Cap ~ r^{d - alpha};
  * a cylinder of bounded cross-section and length L has Cap ~ L
    (linear, because far-apart slices barely interact).

First run takes ~20 s (two evaluator builds).
"""

from subwalk import (ball_capacity_scan, ball_points, build_evaluators,
                     cylinder_capacity_scan, equilibrium, point_set,
                     power_alpha, scaling_check)


def main():
    print("building evaluators (alpha = 1 and 2, d = 3) ...")
    ev1, ev2 = build_evaluators([power_alpha(1.0), power_alpha(2.0)])

    print("\nsingle point: Cap({0}) = 1/G(0)")
    for label, ev in (("alpha=1", ev1), ("alpha=2", ev2)):
        res = equilibrium(ev, point_set([[0, 0, 0]]))
        print(f"  {label}: Cap = {res.capacity:.10f}   "
              f"1/G(0) = {1.0 / ev.g0_full():.10f}")

    print("\nballs: Cap(B_r) / r^(d - alpha) settles into a narrow band")
    for label, ev, expo in (("alpha=1", ev1, 2.0), ("alpha=2", ev2, 1.0)):
        rows = ball_capacity_scan(ev, [2, 4, 8, 16])
        cells = ", ".join(f"r={int(r)}: {cap / r ** expo:.3f}"
                          for r, _n, cap in rows)
        print(f"  {label} (exponent {expo:g}): {cells}")

    print("\ncylinders (radius-2 cross-section, alpha = 1): "
          "capacity doubles with length")
    rows = cylinder_capacity_scan(ev1, 2.0, [8, 16, 32, 64])
    caps = {L: cap for L, _n, cap in rows}
    for L, _n, cap in rows:
        note = ""
        if 2 * L in caps:
            note = f"   Cap(2L)/Cap(L) = {caps[2 * L] / cap:.4f}"
        print(f"  L = {L:>3}: Cap = {cap:>9.3f}{note}")
    print("  the ratio drifts toward 2 from below; the log-interaction "
          "between slices fades as L grows")

    print("\ndilation: Cap(s B) / s^(d - alpha) is near-constant")
    base = ball_points(2)
    for s, cap, normed in scaling_check(ev1, base, [1, 2, 3, 4]):
        print(f"  s = {s:g}: Cap = {cap:>9.3f}   "
              f"Cap / s^(d-alpha) = {normed:.3f}")


if __name__ == "__main__":
    main()
