"""Exact and approximate transition kernels of the simple walk on Z^d.

Exact k-step probabilities are produced by iterated stencil convolution
on a bounded box with absorbing truncation at the boundary.  Entries
within L-inf distance (evolve_radius - k) of the origin are exact path
counts; for everything else the per-step absorbed-mass ledger gives a
computed upper bound on the truncation error (mass that left the box and
could have returned).  Storage keeps one fundamental domain of the
hypercube symmetry group (orderings and sign flips), a 48x reduction at
d = 3.

The Gaussian local-CLT surrogate is

    q(n, x) = 2 (d / (2 pi n))^{d/2} exp(-d |x|^2 / (2 n)),

valid on parity-matched pairs (n and x1+...+xd of equal parity); the
factor 2 is the parity weight.  The error p - q is O(|x|^{-2} n^{-d/2})
with an empirical constant fitted from the exact table.
"""

import math
import struct
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numba
import numpy as np

from .bernstein import SubordinationCoefficients, tau_pmf
from .errors import BudgetError, DomainError

__all__ = [
    "LatticePoint", "TransitionTable", "step_kernel", "pmf_table",
    "gaussian_q", "clt_error", "fit_clt_constant", "subordinated_pmf",
    "save_table", "load_table",
]


# ---------------------------------------------------------------------------
# lattice points

@dataclass(frozen=True)
class LatticePoint:
    """An integer lattice point with norm and parity accessors."""
    coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(v) for v in self.coords))

    @property
    def d(self) -> int:
        return len(self.coords)

    @property
    def norm(self) -> float:
        return math.sqrt(sum(v * v for v in self.coords))

    @property
    def norm1(self) -> int:
        return sum(abs(v) for v in self.coords)

    @property
    def norm_inf(self) -> int:
        return max(abs(v) for v in self.coords) if self.coords else 0

    @property
    def parity(self) -> int:
        return sum(self.coords) & 1

    def __iter__(self):
        return iter(self.coords)


def as_coords(x, d: Optional[int] = None) -> tuple:
    """Coerce LatticePoint / sequence / scalar-0 into a coordinate tuple."""
    if isinstance(x, LatticePoint):
        t = x.coords
    elif np.ndim(x) == 0:
        if d == 1:
            t = (int(x),)
        elif int(x) != 0:
            raise DomainError("scalar coordinates only allowed for the origin")
        else:
            t = (0,) * (d or 3)
    else:
        t = tuple(int(v) for v in x)
    if d is not None and len(t) != d:
        raise DomainError(f"expected a {d}-vector, got {t}")
    return t


def step_kernel(d: int) -> dict:
    """One-step law of the simple walk: mass 1/(2d) on each unit neighbor."""
    if d < 1:
        raise DomainError(f"dimension must be >= 1, got {d}")
    out = {}
    for j in range(d):
        for s in (+1, -1):
            e = [0] * d
            e[j] = s
            out[tuple(e)] = 1.0 / (2 * d)
    return out


# ---------------------------------------------------------------------------
# fundamental-domain indexing (d <= 3)

def _octant_coords(d: int, R: int):
    """Representative coordinates with x1 >= x2 >= ... >= 0, x1 <= R."""
    if d == 1:
        xs = np.arange(R + 1, dtype=np.int64)
        return (xs,)
    if d == 2:
        pts = [(x, y) for x in range(R + 1) for y in range(x + 1)]
    elif d == 3:
        pts = [(x, y, z) for x in range(R + 1) for y in range(x + 1)
               for z in range(y + 1)]
    else:
        raise DomainError(f"tables support d <= 3, got d={d}")
    arr = np.array(pts, dtype=np.int64)
    return tuple(arr[:, j] for j in range(d))


def _octant_index(d: int, R: int, coords) -> np.ndarray:
    idx = np.full((R + 1,) * d, -1, dtype=np.int64)
    idx[coords] = np.arange(len(coords[0]))
    return idx


def _canonical(pts: np.ndarray) -> np.ndarray:
    """Map points to their fundamental-domain representatives."""
    return -np.sort(-np.abs(np.asarray(pts, dtype=np.int64)), axis=1)


# ---------------------------------------------------------------------------
# evolution kernels

@numba.njit(parallel=True, cache=True)
def _step3(p, pn, acc, w):
    """One nearest-neighbor averaging step on a 3-d box with absorbing
    boundary; accumulates w[q] * new_state into acc[q] and returns the
    surviving total mass."""
    n = p.shape[0]
    m = acc.shape[0]
    total = 0.0
    for i in numba.prange(n):
        sub = 0.0
        for j in range(n):
            for l in range(n):
                v = 0.0
                if i > 0:
                    v += p[i - 1, j, l]
                if i < n - 1:
                    v += p[i + 1, j, l]
                if j > 0:
                    v += p[i, j - 1, l]
                if j < n - 1:
                    v += p[i, j + 1, l]
                if l > 0:
                    v += p[i, j, l - 1]
                if l < n - 1:
                    v += p[i, j, l + 1]
                v *= 0.16666666666666666
                pn[i, j, l] = v
                sub += v
                for q in range(m):
                    acc[q, i, j, l] += w[q] * v
        total += sub
    return total


def _step_low_dim(d, p, pn):
    """Absorbing-boundary step for d = 1, 2 (numpy slicing)."""
    pn[...] = 0.0
    if d == 1:
        pn[1:] += p[:-1]
        pn[:-1] += p[1:]
        pn /= 2.0
    else:
        pn[1:, :] += p[:-1, :]
        pn[:-1, :] += p[1:, :]
        pn[:, 1:] += p[:, :-1]
        pn[:, :-1] += p[:, 1:]
        pn /= 4.0
    return float(pn.sum())


class EvolveResult(NamedTuple):
    slices: np.ndarray        # (k_store+1, oct_size)
    deficits: np.ndarray      # (k_total+1,) cumulative absorbed mass
    center: np.ndarray        # (k_total+1,) p(k, 0)
    acc: np.ndarray           # (m, box...) weighted sums over k = 1..k_total
    store_radius: int
    oct_coords: tuple
    oct_index: np.ndarray


def _evolve(d, box_radius, k_total, store_radius, k_store, weights=None):
    """Run the walk on a box of L-inf radius ``box_radius`` for ``k_total``
    steps; store fundamental-domain slices for k <= k_store within
    ``store_radius``, track center values and absorbed mass, and
    accumulate sum_k weights[q, k] p(k, .) for each weight row."""
    n = 2 * box_radius + 1
    c = box_radius
    shape = (n,) * d
    p = np.zeros(shape)
    p[(c,) * d] = 1.0
    pn = np.empty(shape)
    m = 0 if weights is None else weights.shape[0]
    if weights is not None and weights.shape[1] < k_total + 1:
        raise DomainError("weight rows must cover k = 0..k_total")
    acc = np.zeros((m,) + shape)
    oc = _octant_coords(d, store_radius)
    oidx = _octant_index(d, store_radius, oc)
    gather = tuple(c + a for a in oc)
    slices = np.zeros((k_store + 1, len(oc[0])))
    slices[0, oidx[(0,) * d]] = 1.0
    center = np.zeros(k_total + 1)
    center[0] = 1.0
    deficits = np.zeros(k_total + 1)
    wcol = np.empty(m)
    for k in range(1, k_total + 1):
        if d == 3:
            if m:
                wcol[:] = weights[:, k]
            mass = _step3(p, pn, acc, wcol)
        else:
            mass = _step_low_dim(d, p, pn)
            for q in range(m):
                acc[q] += weights[q, k] * pn
        p, pn = pn, p
        deficits[k] = max(0.0, 1.0 - mass)
        if k <= k_store:
            slices[k] = p[gather]
        center[k] = p[(c,) * d]
    return EvolveResult(slices, deficits, center, acc, store_radius, oc, oidx)


# ---------------------------------------------------------------------------
# transition table

@dataclass
class TransitionTable:
    """Exact k-step probabilities p(k, x) for k <= K, |x|_inf <= R.

    One fundamental-domain slice per k; symmetry under coordinate
    permutations and sign flips holds exactly by construction because
    every query is canonicalized before lookup.  ``deficits[k]`` bounds
    the absorbing-truncation error of any entry at step k; it is zero
    while k <= evolve_radius.
    """
    d: int
    K: int
    R: int
    evolve_radius: int
    slices: np.ndarray
    deficits: np.ndarray
    _oct_index: np.ndarray = None

    def __post_init__(self):
        if self._oct_index is None:
            oc = _octant_coords(self.d, self.R)
            self._oct_index = _octant_index(self.d, self.R, oc)

    def prob(self, k: int, x) -> float:
        xt = as_coords(x, self.d)
        if not 0 <= k <= self.K:
            raise DomainError(f"k={k} outside table range 0..{self.K}")
        can = _canonical(np.array([xt]))[0]
        if can[0] > self.R:
            raise DomainError(f"|x|_inf={can[0]} outside stored radius {self.R}")
        return float(self.slices[k, self._oct_index[tuple(can)]])

    def prob_batch(self, k: int, pts: np.ndarray) -> np.ndarray:
        if not 0 <= k <= self.K:
            raise DomainError(f"k={k} outside table range 0..{self.K}")
        can = _canonical(pts)
        if can[:, 0].max(initial=0) > self.R:
            raise DomainError("a point falls outside the stored radius")
        return self.slices[k][self._oct_index[tuple(can.T)]]

    def k_column(self, x) -> np.ndarray:
        """All stored p(k, x) for k = 0..K at a fixed x."""
        can = _canonical(np.array([as_coords(x, self.d)]))[0]
        if can[0] > self.R:
            raise DomainError(f"|x|_inf={can[0]} outside stored radius {self.R}")
        return self.slices[:, self._oct_index[tuple(can)]]

    def error_bound(self, k: int) -> float:
        return float(self.deficits[k])

    def is_exact(self, k: int, x) -> bool:
        xt = as_coords(x, self.d)
        ninf = max(abs(v) for v in xt)
        return ninf <= self.evolve_radius - k or self.deficits[k] == 0.0


def pmf_table(d: int, K: int, R: int, store_radius: Optional[int] = None,
              memory_budget_gb: float = 2.0) -> TransitionTable:
    """Exact transition table by iterated convolution.

    The walk is evolved on the L-inf box of radius R (absorbing
    truncation); slices are stored for k <= K within ``store_radius``
    (default R).  Entries within distance R - k of the origin are exact;
    all entries carry the absorbed-mass bound ``deficits[k]``.
    """
    if d < 1 or d > 3:
        raise DomainError(f"pmf_table supports d in 1..3, got {d}")
    if K < 1 or R < 1:
        raise DomainError("K and R must be >= 1")
    Rs = R if store_radius is None else min(store_radius, R)
    oct_size = len(_octant_coords(d, Rs)[0])
    need = (K + 1) * oct_size * 8 + 2 * (2 * R + 1) ** d * 8
    if need > memory_budget_gb * 2 ** 30:
        raise BudgetError(
            f"table needs {need / 2**30:.2f} GiB > budget {memory_budget_gb} GiB",
            suggestion=f"reduce K={K} or R={R}, or pass a smaller store_radius")
    ev = _evolve(d, R, K, Rs, K)
    return TransitionTable(d=d, K=K, R=Rs, evolve_radius=R,
                           slices=ev.slices, deficits=ev.deficits,
                           _oct_index=ev.oct_index)


# ---------------------------------------------------------------------------
# binary cache

_MAGIC = b"SWTB"
_VERSION = 1


def save_table(table: TransitionTable, path) -> None:
    """Binary table cache; round-trips bit-exactly."""
    with open(path, "wb") as fh:
        fh.write(struct.pack("<4sHHiii", _MAGIC, _VERSION, table.d,
                             table.K, table.R, table.evolve_radius))
        fh.write(table.deficits.astype("<f8").tobytes())
        fh.write(np.ascontiguousarray(table.slices, dtype="<f8").tobytes())


def load_table(path) -> TransitionTable:
    with open(path, "rb") as fh:
        header = fh.read(20)
        if len(header) < 20:
            raise DomainError(f"truncated table file {path}")
        magic, ver, d, K, R, evr = struct.unpack("<4sHHiii", header)
        if magic != _MAGIC or ver != _VERSION:
            raise DomainError(f"unrecognized table file {path}")
        deficits = np.frombuffer(fh.read((K + 1) * 8), dtype="<f8").copy()
        oct_size = len(_octant_coords(d, R)[0])
        body = fh.read((K + 1) * oct_size * 8)
        if len(deficits) != K + 1 or len(body) != (K + 1) * oct_size * 8:
            raise DomainError(f"truncated table file {path}")
        slices = np.frombuffer(body, dtype="<f8").reshape(K + 1, oct_size).copy()
    return TransitionTable(d=d, K=K, R=R, evolve_radius=evr,
                           slices=slices, deficits=deficits)


# ---------------------------------------------------------------------------
# local CLT surrogate

def gaussian_q(d: int, n: int, x) -> float:
    """The parity-weighted Gaussian surrogate q(n, x)."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    xt = as_coords(x, d)
    r2 = sum(v * v for v in xt)
    return 2.0 * (d / (2.0 * math.pi * n)) ** (d / 2.0) \
        * math.exp(-d * r2 / (2.0 * n))


class CltError(NamedTuple):
    value: float
    parity_matched: bool
    p: float
    q: float


def clt_error(table: TransitionTable, k: int, x) -> CltError:
    """p(k,x) - q(k,x) on parity-matched pairs.

    On a parity mismatch q is not subtracted: the returned value is
    p(k,x) (which is 0) and the mismatch is flagged.
    """
    xt = as_coords(x, table.d)
    p = table.prob(k, xt)
    if (sum(xt) & 1) != (k & 1):
        return CltError(p, False, p, 0.0)
    q = gaussian_q(table.d, k, xt)
    return CltError(p - q, True, p, q)


class CltFit(NamedTuple):
    c1: float
    per_k: np.ndarray  # per_k[k] = max |E| r^2 k^{d/2} over the sweep


def fit_clt_constant(table: TransitionTable, k_max: Optional[int] = None,
                     r_min: float = 2.0, r_max: float = 20.0) -> CltFit:
    """Empirical constant for |p - q| <= c1 |x|^{-2} k^{-d/2}.

    Sweeps parity-matched entries with r_min <= |x| <= r_max (x = 0 is
    excluded: the bound degenerates there) and returns the maximum of
    |E| |x|^2 k^{d/2}, together with the per-k profile.
    """
    d = table.d
    km = table.K if k_max is None else min(k_max, table.K)
    oc = _octant_coords(d, table.R)
    pts = np.stack(oc, axis=-1) if d > 1 else oc[0][:, None]
    r2 = (pts.astype(float) ** 2).sum(axis=1)
    sel = (r2 >= r_min ** 2) & (r2 <= r_max ** 2)
    pts_s = pts[sel]
    r2_s = r2[sel]
    par = pts_s.sum(axis=1) & 1
    flat = table._oct_index[tuple(pts_s.T)] if d > 1 else pts_s[:, 0]
    per_k = np.zeros(km + 1)
    for k in range(1, km + 1):
        match = par == (k & 1)
        if not match.any():
            continue
        p = table.slices[k][flat[match]]
        q = 2.0 * (d / (2.0 * math.pi * k)) ** (d / 2.0) \
            * np.exp(-d * r2_s[match] / (2.0 * k))
        per_k[k] = np.max(np.abs(p - q) * r2_s[match]) * k ** (d / 2.0)
    return CltFit(float(per_k.max()), per_k)


# ---------------------------------------------------------------------------
# subordinated one-step law

class SubordinatedPmf(NamedTuple):
    value: float
    deficit: float


def subordinated_pmf(table: TransitionTable, coeffs: SubordinationCoefficients,
                     n: int, x, tol: Optional[float] = None) -> SubordinatedPmf:
    """n-step law of the subordinated walk at x:
    p_sub(n, x) = sum_k P(tau_n = k) p(k, x), truncated at the table K.

    ``deficit`` is the truncated mass of tau_n (an upper bound for the
    missing contribution).  If ``tol`` is given and the deficit exceeds
    it, a BudgetError suggests a larger table.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    col = table.k_column(x)
    if n == 1:
        w = coeffs.values[:table.K + 1]
        deficit = coeffs.tail(table.K + 1)
    else:
        w, deficit = tau_pmf(coeffs, n, table.K)
    if tol is not None and deficit > tol:
        raise BudgetError(
            f"subordination deficit {deficit:.3e} exceeds tol {tol:.1e}",
            suggestion=f"rebuild the table with K > {table.K}")
    return SubordinatedPmf(float(np.dot(w, col)), float(deficit))
