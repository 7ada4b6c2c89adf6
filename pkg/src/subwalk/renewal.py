"""Renewal (potential) sequence of a discrete subordinator.

C(n) is the probability that some partial sum of the i.i.d. increments
distributed by c(psi, .) ever equals n.  It satisfies C(0) = 1 and the
convolution recurrence

    C(n) = sum_{k=1}^{n} c(psi, k) C(n-k),

has generating function 1/psi(1-z), and for psi in the completely
monotone subclass is strictly decreasing and strictly log-convex.  For
psi(s) = s^{alpha/2} the strong renewal asymptotic is
C(n) ~ n^{alpha/2 - 1} / Gamma(alpha/2).
"""

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numba
import numpy as np

from .bernstein import BernsteinSpec, SubordinationCoefficients, eval_psi
from .errors import DomainError

__all__ = [
    "RenewalSequence", "renewal_sequence", "check_decreasing",
    "check_log_convexity", "asymptotic_diagnostic", "extend_asymptotically",
    "generating_identity_residual",
]

_EPS = np.finfo(np.float64).eps


@dataclass(frozen=True)
class RenewalSequence:
    """The sequence C(0..N) with provenance metadata.

    ``exact_to`` marks the last index computed by the exact recurrence;
    indices above it (when ``approx_from`` is not None) come from the
    fitted asymptotic continuation and are approximate.  ``bias_bound``
    is a rounding-error bound for the exact range; the recurrence itself
    has no truncation bias when the coefficient table covers n <= N.
    """
    spec: BernsteinSpec
    values: np.ndarray
    alpha: Optional[float]
    source: str  # 'recurrence' | 'closed-form' | 'asymptotic-extension'
    exact_to: int
    bias_bound: float
    approx_from: Optional[int] = None

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def N(self) -> int:
        return len(self.values) - 1


@numba.njit(cache=True)
def _renewal_recurrence(c, N):
    """Kahan-compensated convolution recurrence, ascending-k order.

    The fixed summation order makes recomputation bit-exact.
    """
    C = np.empty(N + 1)
    C[0] = 1.0
    for n in range(1, N + 1):
        s = 0.0
        comp = 0.0
        for k in range(1, n + 1):
            term = c[k] * C[n - k]
            y = term - comp
            t = s + y
            comp = (t - s) - y
            s = t
        C[n] = s
    return C


def renewal_sequence(coeffs: SubordinationCoefficients, N: int) -> RenewalSequence:
    """Run the exact recurrence up to N.

    Requires the coefficient table to cover n <= N; an identity spec
    (all mass on c[1] = 1) short-circuits to the constant sequence.
    """
    if N < 0:
        raise DomainError(f"N must be >= 0, got {N}")
    if coeffs.N < N:
        raise DomainError(
            f"coefficient truncation {coeffs.N} is below the requested N={N}")
    if coeffs.alpha == 2.0:
        vals = np.ones(N + 1)
        return RenewalSequence(spec=coeffs.spec, values=vals, alpha=coeffs.alpha,
                               source="closed-form", exact_to=N, bias_bound=0.0)
    vals = _renewal_recurrence(coeffs.values, N)
    # crude compensated-summation rounding bound, relative per entry
    bias = 4.0 * _EPS * max(N, 1)
    return RenewalSequence(spec=coeffs.spec, values=vals, alpha=coeffs.alpha,
                           source="recurrence", exact_to=N, bias_bound=bias)


class MonotonicityCheck(NamedTuple):
    ok: bool
    first_violation: Optional[int]


_REL_TOL = 1e-14


def check_decreasing(seq: RenewalSequence) -> MonotonicityCheck:
    """Strict decrease of C(n), with 1e-14 relative tolerance.

    A constant stretch (the identity spec) counts as a violation since
    the decrease is not strict.
    """
    C = seq.values
    for n in range(1, len(C)):
        if C[n] >= C[n - 1] * (1.0 - _REL_TOL):
            return MonotonicityCheck(False, n)
    return MonotonicityCheck(True, None)


def check_log_convexity(seq: RenewalSequence) -> MonotonicityCheck:
    """Strict log-convexity C(n-1) C(n+1) > C(n)^2 for 1 < n < N."""
    C = seq.values
    if len(C) < 4:
        raise DomainError("need N >= 3 for a log-convexity check")
    for n in range(2, len(C) - 1):
        if C[n - 1] * C[n + 1] <= C[n] * C[n] * (1.0 + _REL_TOL):
            return MonotonicityCheck(False, n)
    return MonotonicityCheck(True, None)


def asymptotic_diagnostic(seq: RenewalSequence) -> list:
    """Strong-renewal ratios C(n) Gamma(alpha/2) n^{1-alpha/2} / l(n)
    at dyadic n; they should approach 1.  Needs N >= 2^10."""
    if seq.alpha is None:
        raise DomainError("diagnostic needs an identified alpha")
    if seq.N < 2 ** 10:
        raise DomainError(f"need N >= 1024, got {seq.N}")
    alpha = seq.alpha
    rows = []
    for j in range(1, int(math.floor(math.log2(seq.N))) + 1):
        n = 2 ** j
        l_n = seq.spec.l_slowly_varying(n)
        ratio = seq.values[n] * math.gamma(alpha / 2.0) * n ** (1.0 - alpha / 2.0) / l_n
        rows.append((n, ratio))
    return rows


def _fit_amplitude(seq: RenewalSequence) -> float:
    """Least-squares amplitude a of C(n) ~ a n^{alpha/2-1} l(n) over the
    last decade of the exact range."""
    N = seq.exact_to
    lo = max(N // 10, 2)
    n = np.arange(lo, N + 1, dtype=np.float64)
    f = n ** (seq.alpha / 2.0 - 1.0) * seq.spec.l_slowly_varying(n)
    C = seq.values[lo:N + 1]
    return float(np.dot(C, f) / np.dot(f, f))


def extend_asymptotically(seq: RenewalSequence, M: int) -> RenewalSequence:
    """Continue the sequence beyond its exact range by the fitted
    asymptotic a n^{alpha/2-1} l(n); the continuation is approximate and
    flagged via ``approx_from``.  The identity spec continues exactly."""
    if M <= seq.exact_to:
        raise DomainError(f"M={M} does not exceed the exact range {seq.exact_to}")
    if seq.alpha == 2.0:
        vals = np.ones(M + 1)
        return RenewalSequence(spec=seq.spec, values=vals, alpha=seq.alpha,
                               source="closed-form", exact_to=M, bias_bound=0.0)
    if seq.exact_to < 2 ** 10:
        raise DomainError(f"need an exact range of at least 1024, got {seq.exact_to}")
    a = _fit_amplitude(seq)
    vals = np.empty(M + 1)
    vals[:seq.exact_to + 1] = seq.values[:seq.exact_to + 1]
    n = np.arange(seq.exact_to + 1, M + 1, dtype=np.float64)
    vals[seq.exact_to + 1:] = a * n ** (seq.alpha / 2.0 - 1.0) \
        * seq.spec.l_slowly_varying(n)
    return RenewalSequence(spec=seq.spec, values=vals, alpha=seq.alpha,
                           source="asymptotic-extension", exact_to=seq.exact_to,
                           bias_bound=seq.bias_bound, approx_from=seq.exact_to + 1)


def generating_identity_residual(seq: RenewalSequence, z: float) -> float:
    """|psi(1-z) * sum_{k<=N} C(k) z^k - 1| for 0 < z < 1.

    The full series satisfies sum C(k) z^k = 1/psi(1-z); the truncated
    residual is bounded by psi(1-z) C(N) z^{N+1} / (1-z).
    """
    if not 0.0 < z < 1.0:
        raise DomainError(f"z must lie in (0,1), got {z}")
    # Horner evaluation from the high end keeps the sum stable
    acc = 0.0
    for v in seq.values[::-1]:
        acc = acc * z + v
    return abs(eval_psi(seq.spec, 1.0 - z) * acc - 1.0)
