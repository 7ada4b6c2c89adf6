"""Capacities and equilibrium measures of finite lattice sets.

Cap(B) = sum_y rho(y) where the equilibrium measure rho solves
(G0 rho)(x) = 1 on B; the hitting probability from outside is
P_x(hit B) = sum_y rho(y) G0(x - y).  Dense Cholesky handles small
sets, an FFT-convolution matvec inside conjugate gradients handles
large ones, and a linear program gives the variational dual on very
small sets.  All kernels come from a GreenEvaluator, so every entry
carries that evaluator's error budget.
"""

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.fft import irfftn, next_fast_len, rfftn
from scipy.linalg import cho_factor, cho_solve
from scipy.optimize import linprog
from scipy.sparse.linalg import LinearOperator, cg

from .errors import BudgetError, DomainError, SolverError
from .green import GreenEvaluator
from .walk_kernel import _canonical

__all__ = [
    "PointSet", "point_set", "ball_points", "cylinder_points",
    "CapacityResult", "green_matrix", "equilibrium", "capacity_variational",
    "hitting_from_equilibrium", "halo_check", "ball_capacity_scan",
    "cylinder_capacity_scan", "scaling_check", "dilate",
]

_DENSE_LIMIT = 4096
_LP_LIMIT = 500
_NEG_TOL = -1e-10


# ---------------------------------------------------------------------------
# point sets

@dataclass(frozen=True)
class PointSet:
    """Unique lattice points, lexicographically sorted; (n, d) int64."""
    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.int64)
        if pts.ndim != 2:
            raise DomainError("points must form an (n, d) array")
        object.__setattr__(self, "points", np.unique(pts, axis=0))

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def translate(self, shift) -> "PointSet":
        return PointSet(self.points + np.asarray(shift, dtype=np.int64))

    def to_text(self, path) -> None:
        """One point per line, whitespace-separated integers."""
        np.savetxt(path, self.points, fmt="%d")

    @classmethod
    def from_text(cls, path) -> "PointSet":
        """Inverse of to_text; '#' comment lines are skipped."""
        arr = np.loadtxt(path, dtype=np.int64, comments="#", ndmin=2)
        return cls(arr)


def point_set(pts) -> PointSet:
    try:
        arr = np.asarray(pts, dtype=np.int64)
    except (ValueError, TypeError) as exc:
        raise DomainError(f"points must form a uniform integer array: {exc}")
    return PointSet(arr)


def ball_points(radius: float, center=(0, 0, 0), d: int = 3) -> PointSet:
    """Lattice points with |x - center| <= radius."""
    if radius < 0:
        raise DomainError(f"radius must be >= 0, got {radius}")
    r = int(math.floor(radius))
    axes = [np.arange(-r, r + 1)] * d
    mesh = np.meshgrid(*axes, indexing="ij")
    r2 = sum(m.astype(np.int64) ** 2 for m in mesh)
    mask = r2 <= radius * radius
    pts = np.stack([m[mask] for m in mesh], axis=-1)
    return PointSet(pts + np.asarray(center, dtype=np.int64))


def cylinder_points(radius: float, length: int, axis: int = 0) -> PointSet:
    """Points with 0 <= x_axis < length and cross-section |x_perp| <= radius."""
    if length < 1:
        raise DomainError(f"length must be >= 1, got {length}")
    r = int(math.floor(radius))
    ys, zs = np.meshgrid(np.arange(-r, r + 1), np.arange(-r, r + 1),
                         indexing="ij")
    sel = ys ** 2 + zs ** 2 <= radius * radius
    ys, zs = ys[sel], zs[sel]
    xs = np.arange(length)
    pts = np.empty((len(xs) * len(ys), 3), dtype=np.int64)
    pts[:, axis] = np.repeat(xs, len(ys))
    perp = [a for a in range(3) if a != axis]
    pts[:, perp[0]] = np.tile(ys, len(xs))
    pts[:, perp[1]] = np.tile(zs, len(xs))
    return PointSet(pts)


# ---------------------------------------------------------------------------
# kernel assembly

def _pack_keys(can: np.ndarray, extent: int) -> np.ndarray:
    M = 2 * extent + 2
    return (can[:, 0].astype(np.int64) * M + can[:, 1]) * M + can[:, 2]


def green_matrix(evaluator: GreenEvaluator, ps: PointSet) -> np.ndarray:
    """Dense matrix G0(x_i - x_j); evaluates each distinct canonical
    offset once (the kernel is invariant under the hypercube group)."""
    pts = ps.points
    n = len(pts)
    if n == 0:
        raise DomainError("empty point set")
    diffs = (pts[:, None, :] - pts[None, :, :]).reshape(-1, 3)
    can = _canonical(diffs)
    extent = int(can[:, 0].max(initial=0))
    keys = _pack_keys(can, extent)
    uniq, inv = np.unique(keys, return_inverse=True)
    M = 2 * extent + 2
    dec = np.empty((len(uniq), 3), dtype=np.int64)
    dec[:, 2] = uniq % M
    rest = uniq // M
    dec[:, 1] = rest % M
    dec[:, 0] = rest // M
    vals = evaluator.kernel_values(dec)
    return vals[inv].reshape(n, n)


# ---------------------------------------------------------------------------
# results

@dataclass
class CapacityResult:
    """Equilibrium/variational solve summary.

    ``residual`` is max |(G rho)(x) - 1| over the set; ``negative_min``
    the most negative weight (0 when the measure is nonnegative);
    ``refined`` marks that the kernel tables were rebuilt once to chase
    negativity."""
    capacity: float
    rho: np.ndarray
    residual: float
    method: str
    n_points: int
    d: int
    alpha: Optional[float]
    negative_min: float = 0.0
    refined: bool = False
    meta: dict = field(default_factory=dict)

    def to_json(self, path=None) -> str:
        doc = {
            "capacity": self.capacity,
            "residual": self.residual,
            "method": self.method,
            "n_points": self.n_points,
            "d": self.d,
            "alpha": self.alpha,
            "negative_min": self.negative_min,
            "refined": self.refined,
        }
        doc.update(self.meta)
        text = json.dumps(doc, indent=2, sort_keys=True)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


# ---------------------------------------------------------------------------
# solvers

def _solve_dense(evaluator, ps):
    G = green_matrix(evaluator, ps)
    b = np.ones(len(G))
    try:
        rho = cho_solve(cho_factor(G), b)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"kernel matrix not positive definite: {exc}")
    residual = float(np.abs(G @ rho - 1.0).max())
    return rho, residual, G


class _ConvOperator:
    """FFT convolution with the Green kernel restricted to a point mask.

    ``scale`` compacts points lying on a sublattice (scale Z)^d into a
    dense index box; the kernel is then evaluated at scale * offsets."""

    def __init__(self, evaluator, pts, scale: int = 1):
        lo = pts.min(axis=0)
        rel = pts - lo
        if scale > 1 and np.any(rel % scale):
            raise DomainError("points do not lie on the stated sublattice")
        self.loc = rel // scale
        self.shape = tuple(int(v) for v in self.loc.max(axis=0) + 1)
        full = tuple(2 * s - 1 for s in self.shape)
        self.fast = tuple(next_fast_len(s) for s in full)
        axes = [np.arange(-(s - 1), s) for s in self.shape]
        mesh = np.meshgrid(*axes, indexing="ij")
        offs = np.stack([m.ravel() for m in mesh], axis=-1)
        kern = evaluator.kernel_values(offs * scale).reshape(full)
        self.khat = rfftn(kern, s=self.fast)
        self.mask = tuple(self.loc.T)
        self.n = len(pts)

    def matvec(self, v):
        vol = np.zeros(self.shape)
        vol[self.mask] = v
        conv = irfftn(rfftn(vol, s=self.fast) * self.khat, s=self.fast)
        sl = tuple(slice(s - 1, 2 * s - 1) for s in self.shape)
        return conv[sl][self.mask]


def _solve_cg(evaluator, ps, rtol, maxiter, scale=1):
    op = _ConvOperator(evaluator, ps.points, scale)
    A = LinearOperator((op.n, op.n), matvec=op.matvec, dtype=np.float64)
    b = np.ones(op.n)
    try:
        rho, info = cg(A, b, rtol=rtol, atol=0.0, maxiter=maxiter)
    except TypeError:  # scipy < 1.12 spelling
        rho, info = cg(A, b, tol=rtol, atol=0.0, maxiter=maxiter)
    if info != 0:
        raise SolverError(f"conjugate gradients did not converge "
                          f"(info={info}, maxiter={maxiter})")
    residual = float(np.abs(op.matvec(rho) - 1.0).max())
    return rho, residual


def equilibrium(evaluator: GreenEvaluator, ps: PointSet, method: str = "auto",
                rtol: float = 1e-10, maxiter: int = 2000,
                scale: int = 1) -> CapacityResult:
    """Equilibrium measure of a finite set: solve (G0 rho) = 1 on B.

    method 'auto' uses dense Cholesky up to 4096 points and FFT-matvec
    conjugate gradients beyond.  ``scale`` declares that the points lie
    on (scale Z)^d, letting the convolution box shrink accordingly.  A
    slightly negative weight triggers one kernel-table refinement; if
    negativity persists it is reported in ``negative_min`` rather than
    raised.
    """
    if ps.d != evaluator.d:
        raise DomainError(f"point set is {ps.d}-dimensional, evaluator is "
                          f"{evaluator.d}")
    if method == "auto":
        method = "dense" if ps.n <= _DENSE_LIMIT else "cg"
    if method not in ("dense", "cg"):
        raise DomainError(f"unknown method {method!r}")

    def solve():
        if method == "dense":
            rho, residual, _ = _solve_dense(evaluator, ps)
        else:
            rho, residual = _solve_cg(evaluator, ps, rtol, maxiter, scale)
        return rho, residual

    rho, residual = solve()
    refined = False
    neg = float(rho.min(initial=0.0))
    if neg < _NEG_TOL:
        evaluator.refine_radial()
        rho, residual = solve()
        refined = True
        neg = float(rho.min(initial=0.0))
    return CapacityResult(
        capacity=float(rho.sum()), rho=rho, residual=residual, method=method,
        n_points=ps.n, d=ps.d, alpha=evaluator.alpha,
        negative_min=min(neg, 0.0), refined=refined)


def capacity_variational(evaluator: GreenEvaluator, ps: PointSet) -> CapacityResult:
    """Variational capacity: maximize sum(mu) over mu >= 0 with
    (G0 mu) <= 1 on B.  Agrees with the equilibrium route when the
    equilibrium measure is nonnegative.  Dense LP, small sets only."""
    if ps.n > _LP_LIMIT:
        raise BudgetError(
            f"variational route limited to {_LP_LIMIT} points, got {ps.n}",
            suggestion="use equilibrium() for larger sets")
    G = green_matrix(evaluator, ps)
    res = linprog(c=-np.ones(ps.n), A_ub=G, b_ub=np.ones(ps.n),
                  bounds=(0.0, None), method="highs")
    if not res.success:
        raise SolverError(f"linear program failed: {res.message}")
    rho = res.x
    residual = float(np.abs(G @ rho - 1.0).max())
    return CapacityResult(
        capacity=float(rho.sum()), rho=rho, residual=residual, method="lp",
        n_points=ps.n, d=ps.d, alpha=evaluator.alpha,
        negative_min=float(min(rho.min(initial=0.0), 0.0)))


# ---------------------------------------------------------------------------
# derived quantities

def hitting_from_equilibrium(evaluator: GreenEvaluator, ps: PointSet,
                             result: CapacityResult, xs) -> np.ndarray:
    """P_x(hit B) = sum_y rho(y) G0(x - y) for each query point."""
    q = np.asarray(xs, dtype=np.int64)
    if q.ndim == 1:
        q = q[None, :]
    diffs = (q[:, None, :] - ps.points[None, :, :]).reshape(-1, 3)
    vals = evaluator.kernel_values(diffs).reshape(len(q), ps.n)
    return vals @ result.rho


def halo_check(evaluator: GreenEvaluator, ps: PointSet,
               result: CapacityResult, margin: int = 3,
               n_samples: int = 64, seed: int = 7) -> float:
    """Maximum of the equilibrium potential on a sampled halo around B.

    The potential is <= 1 everywhere for an exact kernel (maximum
    principle), so values materially above 1 flag kernel error."""
    rng = np.random.default_rng(seed)
    lo = ps.points.min(axis=0) - margin
    hi = ps.points.max(axis=0) + margin
    occupied = set(map(tuple, ps.points))
    samples = []
    while len(samples) < n_samples:
        cand = rng.integers(lo, hi + 1, size=(4 * n_samples, 3))
        for row in cand:
            t = tuple(int(v) for v in row)
            if t not in occupied:
                samples.append(t)
                if len(samples) == n_samples:
                    break
    u = hitting_from_equilibrium(evaluator, ps, result, np.array(samples))
    return float(u.max())


# ---------------------------------------------------------------------------
# scans

def ball_capacity_scan(evaluator: GreenEvaluator, radii,
                       method: str = "auto") -> list:
    """Rows (radius, n_points, capacity) for centered balls."""
    out = []
    for r in radii:
        ps = ball_points(r)
        res = equilibrium(evaluator, ps, method=method)
        out.append((float(r), ps.n, res.capacity))
    return out


def cylinder_capacity_scan(evaluator: GreenEvaluator, radius: float,
                           lengths, method: str = "auto") -> list:
    """Rows (length, n_points, capacity) for cylinders of fixed
    cross-section radius; capacity grows ~ L / log L at alpha = 2 and
    ~ L^{...} regimes otherwise, which the caller can fit."""
    out = []
    for L in lengths:
        ps = cylinder_points(radius, int(L))
        res = equilibrium(evaluator, ps, method=method)
        out.append((int(L), ps.n, res.capacity))
    return out


def dilate(ps: PointSet, s: float) -> PointSet:
    """Voxel dilation: all y with round(y/s) in the base set.

    For integer s this fills each base voxel with its s^d refinement,
    so capacities follow the s^{d - alpha} law; pointwise coordinate
    scaling would leave gaps and break it.
    """
    if s <= 0:
        raise DomainError(f"scale must be positive, got {s}")
    pts = ps.points
    lo = np.floor((pts.min(axis=0) - 0.5) * s).astype(np.int64)
    hi = np.ceil((pts.max(axis=0) + 0.5) * s).astype(np.int64)
    axes = [np.arange(a, b + 1) for a, b in zip(lo, hi)]
    mesh = np.meshgrid(*axes, indexing="ij")
    cand = np.stack([m.ravel() for m in mesh], axis=-1)
    rounded = np.floor(cand / s + 0.5).astype(np.int64)
    base = set(map(tuple, pts))
    keep = np.fromiter((tuple(r) in base for r in rounded),
                       dtype=bool, count=len(rounded))
    return PointSet(cand[keep])


def scaling_check(evaluator: GreenEvaluator, base: PointSet, scales,
                  method: str = "auto") -> list:
    """Rows (s, capacity, capacity / s^{d - alpha}); the last column is
    near-constant when the scaling law holds."""
    alpha = evaluator.alpha
    out = []
    for s in scales:
        ps = dilate(base, s)
        res = equilibrium(evaluator, ps, method=method)
        out.append((float(s), res.capacity,
                    res.capacity / float(s) ** (evaluator.d - alpha)))
    return out
