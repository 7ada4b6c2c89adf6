"""Truncated power-series arithmetic at arbitrary precision.

Series are represented as Python lists of ``mpmath.mpf`` coefficients,
``f[n]`` being the coefficient of ``s**n``.  All routines implement the
classical O(N^2) convolution recurrences; callers choose the working
precision via ``mpmath.workprec``.
"""

from mpmath import mp, mpf


def geometric(N):
    """Coefficients of 1/(1-s) up to order N."""
    one = mpf(1)
    return [one] * (N + 1)


def series_mul(f, g, N):
    """Cauchy product of two series, truncated at order N."""
    out = []
    for n in range(N + 1):
        acc = mp.zero
        lo = max(0, n - (len(g) - 1))
        hi = min(n, len(f) - 1)
        for k in range(lo, hi + 1):
            acc += f[k] * g[n - k]
        out.append(acc)
    return out


def series_pow(f, p, N):
    """f(s)**p truncated at order N; requires f[0] > 0.

    Uses the J.C.P. Miller recurrence
    n*f0*g[n] = sum_{k=1..n} (k*(p+1) - n) * f[k] * g[n-k].
    """
    if f[0] <= 0:
        raise ValueError("series_pow needs a positive constant term")
    p = mpf(p)
    g = [f[0] ** p]
    for n in range(1, N + 1):
        acc = mp.zero
        hi = min(n, len(f) - 1)
        for k in range(1, hi + 1):
            acc += (p * k - (n - k)) * f[k] * g[n - k]
        g.append(acc / (n * f[0]))
    return g


def series_log(f, N):
    """log(f(s)) truncated at order N; requires f[0] > 0.

    From f = exp(l): n*f[n] = sum_{k=1..n} k*l[k]*f[n-k].
    """
    if f[0] <= 0:
        raise ValueError("series_log needs a positive constant term")
    l = [mp.log(f[0])]
    for n in range(1, N + 1):
        acc = mpf(n) * (f[n] if n < len(f) else mp.zero)
        for k in range(1, n):
            acc -= k * l[k] * (f[n - k] if n - k < len(f) else mp.zero)
        l.append(acc / (n * f[0]))
    return l


def series_exp(f, N):
    """exp(f(s)) truncated at order N."""
    g = [mp.exp(f[0])]
    for n in range(1, N + 1):
        acc = mp.zero
        for k in range(1, n + 1):
            fk = f[k] if k < len(f) else mp.zero
            acc += k * fk * g[n - k]
        g.append(acc / n)
    return g
