"""Green function values with certified error bounds.

The Green function G(x) of a transient subordinated walk sums the
probability of ever sitting at x.  The evaluator splits that sum into
an exact zone (transition tables evolved step by step), a local-CLT
zone with a fitted center correction, and an integrable tail, and it
returns every value together with a rigorous error bound built from
those three parts.

The headline law: G(x) ~ C(d, alpha) |x|^{alpha - d}.  For d = 3,
alpha = 1 the constant is C(3,1) ~ 0.12409, so r^2 G(r e_1) flattens
onto that value as r grows.  The alpha = 2 evaluator reproduces the
simple walk, whose origin value 1.516386... is classical.

First run takes ~20 s (table evolution); results stream as computed.
"""

from subwalk import asymptotic_constant, build_evaluators, power_alpha


def main():
    print("building evaluators (alpha = 1 and 2, d = 3) ...")
    ev1, ev2 = build_evaluators([power_alpha(1.0), power_alpha(2.0)])

    print("\nalpha = 1: values along the first axis")
    print(f"{'r':>5} {'G(r e1)':>14} {'bound':>10} {'r^2 G':>10} "
          f"{'parts of the sum'}")
    C31 = asymptotic_constant(3, 1.0)
    for r in (1, 2, 5, 10, 20, 40, 80, 160):
        gv = ev1.green((r, 0, 0))
        parts = " ".join(f"{k}={v:.1e}" for k, v in gv.parts.items())
        print(f"{r:>5} {gv.value:>14.6e} {gv.bound:>10.2e} "
              f"{gv.value * r * r:>10.6f} {parts}")
    print(f"\nlimit constant C(3,1) = {C31:.6f}; the r^2 G column "
          "approaches it from below")

    print("\nalpha = 2 sanity: the subordinated walk is the simple walk")
    g0 = ev2.g0_full()
    print(f"  G(0) = {g0:.10f}")
    print("  classical value 1.5163860591... (triple-integral closed form)")

    print("\nevery value carries its own certificate:")
    gv = ev1.green((60, 0, 0))
    print(f"  G((60,0,0)) = {gv.value:.8e} with bound {gv.bound:.2e} "
          f"({gv.bound / gv.value:.2%} relative)")


if __name__ == "__main__":
    main()
