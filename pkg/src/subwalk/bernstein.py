"""Bernstein functions and their subordination coefficients.

A Bernstein function psi with psi(0)=0 and psi(1)=1 defines a discrete
subordination of a random walk: the subordinated transition operator is
I - psi(I - P), which is convolution by the probability sequence

    c(psi, n) = [s^n] (1 - psi(1 - s)),   n >= 1,

equivalently c(psi,1) = b + int t e^{-t} dnu(t) and
c(psi,n) = (1/n!) int t^n e^{-t} dnu(t) for the Levy triple (0, b, nu).

Three families are supported:

* ``PowerAlpha(alpha)``: psi(s) = s^{alpha/2}, alpha in (0, 2].  The
  coefficients have the closed form (alpha/2)/Gamma(1-alpha/2) *
  Gamma(n-alpha/2)/Gamma(n+1), computed by an exact multiplicative
  recurrence.  alpha = 2 is the degenerate identity (no subordination).
* ``LogPower(alpha, gamma)``: psi(s) = s^{alpha/2} (log(e + 1/s))^{-gamma},
  normalized to psi(1)=1.  Experimental slowly-varying correction;
  membership in the Bernstein class is not established, so the
  nonnegativity of the computed coefficients acts as the acceptance gate.
* ``TabulatedLevy(density, drift)``: psi given by its Levy density;
  coefficients from the integral formulas by adaptive quadrature.
"""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from mpmath import mp
from scipy.integrate import quad
from scipy.special import gammaln

from . import _series
from .errors import DomainError

__all__ = [
    "PowerAlpha", "LogPower", "TabulatedLevy", "BernsteinSpec",
    "power_alpha", "log_power", "tabulated_levy",
    "SubordinationCoefficients", "eval_psi", "coefficients",
    "coefficient_tail_check", "tau_pmf",
]


# ---------------------------------------------------------------------------
# families

@dataclass(frozen=True)
class PowerAlpha:
    """psi(s) = s^{alpha/2} with alpha in (0, 2]."""
    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha <= 2.0:
            raise DomainError(f"PowerAlpha needs alpha in (0, 2], got {self.alpha}")

    def raw(self, lam):
        return lam ** (self.alpha / 2.0)


@dataclass(frozen=True)
class LogPower:
    """psi(s) = s^{alpha/2} (log(e + 1/s))^{-gamma} before normalization."""
    alpha: float
    gamma: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise DomainError(f"LogPower needs alpha in (0, 2), got {self.alpha}")
        if self.gamma < 0.0:
            raise DomainError(f"LogPower needs gamma >= 0, got {self.gamma}")

    def raw(self, lam):
        lam = np.asarray(lam, dtype=float)
        out = np.zeros_like(lam)
        pos = lam > 0
        lp = lam[pos]
        out[pos] = lp ** (self.alpha / 2.0) * np.log(math.e + 1.0 / lp) ** (-self.gamma)
        return out if out.ndim else float(out)


@dataclass(frozen=True)
class TabulatedLevy:
    """psi from a Levy density nu(t) >= 0 on (0, inf) plus drift b >= 0."""
    density: Callable[[float], float]
    drift: float = 0.0

    def __post_init__(self):
        if self.drift < 0.0:
            raise DomainError(f"drift must be >= 0, got {self.drift}")

    def raw(self, lam):
        if np.ndim(lam) > 0:
            return np.array([self.raw(float(v)) for v in np.asarray(lam).ravel()]
                            ).reshape(np.shape(lam))
        lam = float(lam)
        if lam == 0.0:
            return 0.0
        val, _ = quad(lambda t: (-math.expm1(-lam * t)) * self.density(t),
                      0.0, np.inf, limit=200)
        return self.drift * lam + val


# ---------------------------------------------------------------------------
# spec

@dataclass(frozen=True)
class BernsteinSpec:
    """A normalized Bernstein-function description: psi(0)=0, psi(1)=1.

    ``normalizer`` scales the family's raw function so that psi(1) = 1.
    """
    family: object
    normalizer: float = field(init=False)

    def __post_init__(self):
        raw1 = float(np.asarray(self.family.raw(1.0)))
        if not raw1 > 0.0:
            raise DomainError("family evaluates to a nonpositive value at 1")
        object.__setattr__(self, "normalizer", 1.0 / raw1)

    # -- evaluation ---------------------------------------------------------
    def __call__(self, lam):
        return eval_psi(self, lam)

    def psi_array(self, lam):
        """Vectorized psi over a nonnegative array (no domain checks)."""
        return self.normalizer * self.family.raw(np.asarray(lam, dtype=float))

    # -- metadata -----------------------------------------------------------
    @property
    def alpha(self) -> Optional[float]:
        return getattr(self.family, "alpha", None)

    @property
    def is_power(self) -> bool:
        return isinstance(self.family, PowerAlpha)

    def l_slowly_varying(self, x):
        """The slowly varying part: l(x) = x^{-alpha/2} / psi(1/x).

        Identically 1 for PowerAlpha; for TabulatedLevy no slowly varying
        profile is identified and a DomainError is raised.
        """
        if isinstance(self.family, PowerAlpha):
            return np.ones_like(np.asarray(x, dtype=float)) if np.ndim(x) else 1.0
        if isinstance(self.family, LogPower):
            x = np.asarray(x, dtype=float)
            out = np.log(math.e + x) ** self.family.gamma / self.normalizer
            return out if out.ndim else float(out)
        raise DomainError("no slowly varying profile for a tabulated Levy density")

    def describe(self) -> dict:
        f = self.family
        if isinstance(f, PowerAlpha):
            return {"family": "power", "alpha": f.alpha}
        if isinstance(f, LogPower):
            return {"family": "logpower", "alpha": f.alpha, "gamma": f.gamma}
        return {"family": "tabulated-levy", "drift": f.drift}


def power_alpha(alpha: float) -> BernsteinSpec:
    """Stable-type spec psi(s) = s^{alpha/2}; alpha=2 means the identity."""
    return BernsteinSpec(PowerAlpha(float(alpha)))


def log_power(alpha: float, gamma: float) -> BernsteinSpec:
    """Logarithmically corrected power spec (experimental family)."""
    return BernsteinSpec(LogPower(float(alpha), float(gamma)))


def tabulated_levy(density, drift: float = 0.0) -> BernsteinSpec:
    """Spec from an explicit Levy density and drift."""
    return BernsteinSpec(TabulatedLevy(density, float(drift)))


def eval_psi(spec: BernsteinSpec, lam: float) -> float:
    """Normalized psi(lambda); lambda must be >= 0."""
    lam = float(lam)
    if lam < 0.0:
        raise DomainError(f"psi is defined on [0, inf), got {lam}")
    if lam == 0.0:
        return 0.0
    return float(spec.normalizer * np.asarray(spec.family.raw(lam)))


# ---------------------------------------------------------------------------
# coefficients

@dataclass(frozen=True)
class SubordinationCoefficients:
    """The probability sequence c(psi, n), n = 1..N.

    ``values`` has length N+1 with ``values[0] = 0`` so that ``values[n]``
    is c(psi, n) directly.  ``tail_exponent`` is 1 + alpha/2 when an alpha
    is identified, else None.
    """
    spec: BernsteinSpec
    values: np.ndarray
    N: int
    alpha: Optional[float]
    tail_exponent: Optional[float]

    def __post_init__(self):
        self.values.setflags(write=False)

    def partial_sums(self) -> np.ndarray:
        """Cumulative sums; entry n is sum_{k<=n} c(psi,k)."""
        return np.cumsum(self.values)

    def tail(self, n: int) -> float:
        """Exact tail mass sum_{k>=n} c(psi,k) = 1 - sum_{k<n} c(psi,k)."""
        return float(1.0 - np.sum(self.values[:n]))


_NEG_TOL = -1e-14


def _coeffs_power_closed(alpha: float, N: int) -> np.ndarray:
    """Closed-form coefficients via the stable product recurrence
    c[1] = alpha/2, c[n+1] = c[n] * (n - alpha/2) / (n + 1)."""
    c = np.zeros(N + 1)
    if N >= 1:
        c[1] = alpha / 2.0
    for n in range(1, N):
        c[n + 1] = c[n] * (n - alpha / 2.0) / (n + 1.0)
    return c


def series_coefficients(spec: BernsteinSpec, N: int, precision_bits: int = 384) -> np.ndarray:
    """Taylor coefficients of s -> 1 - psi(1 - s) at high precision.

    Independent of the closed form; works for PowerAlpha and LogPower.
    Returns an array of length N+1 with entry 0 equal to 0 exactly when
    psi(1) = 1.
    """
    fam = spec.family
    if isinstance(fam, TabulatedLevy):
        raise DomainError("series expansion needs a symbolic family")
    with mp.workprec(precision_bits):
        one_minus_s = [mp.mpf(1), mp.mpf(-1)]
        a = mp.mpf(fam.alpha)
        pw = _series.series_pow(one_minus_s, a / 2, N)
        if isinstance(fam, PowerAlpha):
            psi_series = pw
            norm = mp.mpf(1)
        else:
            # log(e + 1/(1-s)) as a series, then raised to -gamma
            w = _series.geometric(N)
            w[0] = w[0] + mp.e
            lw = _series.series_log(w, N)
            lwp = _series.series_pow(lw, -mp.mpf(fam.gamma), N)
            psi_series = _series.series_mul(pw, lwp, N)
            norm = mp.mpf(1) / psi_series[0] if psi_series[0] != 0 else mp.mpf(1)
        out = np.zeros(N + 1)
        out[0] = float(1 - norm * psi_series[0])
        for n in range(1, N + 1):
            out[n] = float(-norm * psi_series[n])
    return out


def _coeffs_levy(spec: BernsteinSpec, N: int) -> np.ndarray:
    """Coefficients from the Levy-triple integrals by quadrature."""
    fam = spec.family
    c = np.zeros(N + 1)
    for n in range(1, N + 1):
        lg = gammaln(n + 1)

        def f(t, n=n, lg=lg):
            # t^n e^{-t} / n!  evaluated in log space to avoid overflow
            return math.exp(n * math.log(t) - t - lg) * fam.density(t) if t > 0 else 0.0

        upper = n + 40.0 * math.sqrt(n) + 60.0
        val, _ = quad(f, 0.0, upper, limit=200, points=[max(n - 1, 0.5), n + 1])
        rest, _ = quad(f, upper, np.inf, limit=100)
        c[n] = val + rest
    c[1] += fam.drift
    return spec.normalizer * c


def coefficients(spec: BernsteinSpec, N: int) -> SubordinationCoefficients:
    """Subordination coefficients c(psi, n) for n = 1..N.

    PowerAlpha uses the exact Gamma-ratio recurrence; LogPower the
    high-precision series expansion of 1 - psi(1-s); TabulatedLevy the
    Levy-integral formulas.  Any coefficient below -1e-14 raises a
    DomainError: the requested spec is then not a valid Bernstein
    subordination.
    """
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    fam = spec.family
    if isinstance(fam, PowerAlpha):
        vals = _coeffs_power_closed(fam.alpha, N)
    elif isinstance(fam, LogPower):
        vals = series_coefficients(spec, N)
        vals[0] = 0.0
    else:
        vals = _coeffs_levy(spec, N)
    if vals.min() < _NEG_TOL:
        n_bad = int(np.argmin(vals))
        raise DomainError(
            f"not a valid Bernstein subordination: c[{n_bad}] = {vals[n_bad]:.3e} < 0")
    np.clip(vals, 0.0, None, out=vals)
    alpha = spec.alpha
    return SubordinationCoefficients(
        spec=spec, values=vals, N=N, alpha=alpha,
        tail_exponent=None if alpha is None else 1.0 + alpha / 2.0)


def coefficient_tail_check(coeffs: SubordinationCoefficients) -> list:
    """Tail-law diagnostic at dyadic n.

    Returns rows (n, tail, ratio) where ratio = tail(n) * l(n) *
    Gamma(1 - alpha/2) * n^{alpha/2}; the ratio should approach 1.  For
    alpha = 2 the tails vanish beyond n = 1 and the ratios are reported
    as 0.  Requires at least 10 dyadic checkpoints (N >= 1024).
    """
    if coeffs.alpha is None:
        raise DomainError("tail diagnostic needs an identified alpha")
    n_checks = int(math.floor(math.log2(coeffs.N)))
    if n_checks < 10:
        raise DomainError(f"need N >= 1024 for 10 dyadic checkpoints, got N={coeffs.N}")
    alpha = coeffs.alpha
    rows = []
    for j in range(1, n_checks + 1):
        n = 2 ** j
        t = coeffs.tail(n)
        if alpha == 2.0:
            rows.append((n, t, 0.0))
            continue
        l_n = coeffs.spec.l_slowly_varying(n)
        ratio = t * l_n * math.gamma(1.0 - alpha / 2.0) * n ** (alpha / 2.0)
        rows.append((n, t, ratio))
    return rows


def tau_pmf(coeffs: SubordinationCoefficients, n: int, kmax: int):
    """Law of the n-fold increment sum tau_n, truncated at kmax.

    Returns (probs, deficit): ``probs`` has length kmax+1 with
    ``probs[k] = P(tau_n = k)`` (zero below k = n), and ``deficit`` is the
    truncated mass 1 - sum(probs).
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if kmax < n:
        raise DomainError(f"empty distribution: kmax={kmax} < n={n}")
    base = np.zeros(kmax + 1)
    m = min(coeffs.N, kmax)
    base[:m + 1] = coeffs.values[:m + 1]
    # binary exponentiation of the truncated generating polynomial
    out = None
    power = base
    e = n
    while e > 0:
        if e & 1:
            out = power.copy() if out is None else np.convolve(out, power)[:kmax + 1]
        e >>= 1
        if e:
            power = np.convolve(power, power)[:kmax + 1]
    deficit = float(1.0 - out.sum())
    return out, deficit
