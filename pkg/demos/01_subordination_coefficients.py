"""Subordination coefficients and the renewal sequence.

A Bernstein function psi with psi(1) = 1 turns the simple random walk
into a new walk in one line: the subordinated transition operator is
I - psi(I - P).  Expanding psi(1 - s) around s = 1 produces a
probability sequence c(psi, n), and the subordinated walk is literally
the simple walk run for a random number of steps drawn from that
sequence at each move.  This demo prints the coefficients for the
stable family psi(lambda) = lambda^{alpha/2}, checks their tail mass
against the exact Gamma-function tail law, and follows the induced
renewal sequence C(n) all the way to its power-law asymptote.

Runs in a few seconds, no precomputed tables needed.
"""

import math

from subwalk import (check_decreasing, check_log_convexity, coefficients,
                     power_alpha, renewal_sequence)


def section(title):
    print()
    print(title)
    print("-" * len(title))


def main():
    section("Coefficients c(psi_alpha, n) for the stable family")
    print(f"{'n':>4}" + "".join(f"  alpha={a:<8g}" for a in (0.5, 1.0, 1.5)))
    tables = {a: coefficients(power_alpha(a), 2 ** 14) for a in (0.5, 1.0, 1.5)}
    for n in (1, 2, 3, 4, 8, 64, 1024):
        row = "".join(f"  {tables[a].values[n]:<13.6e}" for a in tables)
        print(f"{n:>4}{row}")
    print("\nalpha = 1 gives the classical ballot numbers: 1/2, 1/8, 1/16, "
          "5/128, ...")

    section("Tail mass obeys the Gamma-function law")
    print("sum_{n>N} c ~ N^{-alpha/2} / Gamma(1 - alpha/2); the bound "
          "below uses twice that value.")
    N = 10_000
    for a, co in tables.items():
        tail = co.tail(N + 1)
        law = N ** (-a / 2.0) / math.gamma(1.0 - a / 2.0)
        print(f"  alpha={a:<4g} tail beyond {N}: {tail:.6e}   "
              f"law: {law:.6e}   ratio {tail / law:.3f}")

    section("Renewal sequence C(n): return-probability weights")
    print("C(n) solves C(n) = sum_k c(k) C(n-k); it is completely "
          "monotone-like: strictly decreasing and log-convex.")
    for a in (0.5, 1.0, 1.5):
        seq = renewal_sequence(tables[a], 2 ** 14)
        dec = check_decreasing(seq)
        lc = check_log_convexity(seq)
        last_n = seq.N
        ratio = (seq.values[last_n] * math.gamma(a / 2.0)
                 * last_n ** (1.0 - a / 2.0))
        print(f"  alpha={a:<4g} decreasing: {dec.ok}  log-convex: {lc.ok}  "
              f"C(n) Gamma(a/2) n^(1-a/2) at n={last_n}: {ratio:.6f}")
    print("\nThe last column tending to 1 is the strong renewal property: "
          "C(n) ~ n^{alpha/2 - 1} / Gamma(alpha/2).")

    section("alpha = 1 closed form")
    seq1 = renewal_sequence(tables[1.0], 64)
    print("C(n) = binom(2n, n) 4^{-n}; first values:")
    b = 1.0
    for n in range(7):
        print(f"  n={n}: computed {seq1.values[n]:.12f}   "
              f"closed form {b:.12f}")
        b *= (2 * n + 1) / (2 * n + 2)


if __name__ == "__main__":
    main()
