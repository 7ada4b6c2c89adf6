"""Command-line front door: one subcommand per analysis.

Outputs are machine readable (JSON by default, RFC-4180 CSV with
--format csv) and embed a run manifest; reruns with equal parameters
produce identical stdout (the manifest timestamp is only stamped into
files written via --out).  Exit codes: 0 success, 2 domain error,
3 budget exceeded, 4 solver failure.

Heavy Green-evaluator state is cached under $SUBWALK_CACHE when that
variable points to a writable directory.
"""

import argparse
import csv
import datetime
import io
import json
import os
import sys

import numpy as np

from . import __version__
from .bernstein import (SubordinationCoefficients, coefficients, log_power,
                        power_alpha)
from .capacity import (PointSet, ball_points, capacity_variational,
                       cylinder_points, equilibrium)
from .errors import BudgetError, DomainError, SolverError
from .green import GreenEvaluator, asymptotic_constant, build_evaluator, \
    riesz_ratio_report
from .massiveness import (AxisSet, BallSet, ConeSet, CylinderSet,
                          ExplicitSet, HyperplaneSet, LinearThorn,
                          LinOverLogThorn, PowerThorn, TableThorn, ThornSet,
                          fat_thorn_rule, hyperplane_return_sum,
                          thorn_series_terms, wiener_test)
from .montecarlo import (EscapeRadius, Horizon, SimConfig,
                         hitting_probability)
from .renewal import RenewalSequence

__all__ = ["main"]


# ---------------------------------------------------------------------------
# plumbing

def _manifest(args, subcommand: str) -> dict:
    skip = {"func", "format", "out"}
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in skip and not k.startswith("_")}
    return {
        "subcommand": subcommand,
        "parameters": params,
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "timestamp": None,
    }


def _emit(args, doc: dict, csv_header, csv_rows) -> None:
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(csv_header)
        for row in csv_rows:
            w.writerow(row)
        sys.stdout.write(buf.getvalue())
        payload = buf.getvalue()
    else:
        payload = json.dumps(doc, indent=2, sort_keys=True)
        sys.stdout.write(payload + "\n")
    if args.out:
        stamped = dict(doc)
        stamped["manifest"] = dict(doc.get("manifest", {}))
        stamped["manifest"]["timestamp"] = \
            datetime.datetime.now().isoformat(timespec="seconds")
        stamped["manifest"]["outputs"] = [args.out]
        with open(args.out, "w") as fh:
            if args.format == "csv":
                fh.write(payload)
            else:
                fh.write(json.dumps(stamped, indent=2, sort_keys=True) + "\n")


def _spec_from(args):
    gamma = getattr(args, "gamma", None)
    if gamma is not None:
        return log_power(args.alpha, gamma)
    return power_alpha(args.alpha)


def _parse_vector(text: str) -> tuple:
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise DomainError(f"cannot parse vector {text!r}")


def parse_set(text: str, d: int = 3):
    """Set DSL: axis | hyperplane[:c] | ball:r | cylinder:L,base |
    cone:slope | thorn:FAMILY:PARAM | file:PATH | points:x,y,z;..."""
    kind, _, rest = text.partition(":")
    try:
        if kind == "axis":
            return AxisSet(d=d)
        if kind == "hyperplane":
            return HyperplaneSet(coordinate=int(rest) if rest else d - 1, d=d)
        if kind == "ball":
            return BallSet(r=float(rest), d=d)
        if kind == "cylinder":
            L, base = rest.split(",")
            return CylinderSet(L=int(L), base=float(base), d=d)
        if kind == "cone":
            return ConeSet(slope=float(rest), d=d)
        if kind == "thorn":
            fam, _, par = rest.partition(":")
            if fam == "linear":
                prof = LinearThorn(float(par))
            elif fam == "power":
                prof = PowerThorn(float(par))
            elif fam == "linoverlog":
                prof = LinOverLogThorn(float(par))
            else:
                raise DomainError(f"unknown thorn family {fam!r}")
            return ThornSet(profile=prof, d=d)
        if kind == "file":
            return ExplicitSet(points=PointSet.from_text(rest), d=d)
        if kind == "points":
            pts = [_parse_vector(p) for p in rest.split(";") if p]
            return ExplicitSet(points=PointSet(np.array(pts)), d=d)
    except ValueError:
        raise DomainError(f"cannot parse set spec {text!r}")
    raise DomainError(f"unknown set kind {kind!r}")


def _finite_points(setspec):
    if isinstance(setspec, ExplicitSet):
        return setspec.points
    if isinstance(setspec, BallSet):
        return ball_points(setspec.r, d=setspec.d)
    if isinstance(setspec, CylinderSet):
        return cylinder_points(setspec.base, setspec.L)
    raise DomainError("this operation needs a finite set "
                      "(ball, cylinder, file, or points)")


def _add_evaluator_flags(p):
    p.add_argument("--k1", type=int, default=512,
                   help="exact-zone depth (base steps)")
    p.add_argument("--box-radius", type=int, default=112,
                   help="exact-zone box radius")
    p.add_argument("--n-renewal", type=int, default=2 ** 14,
                   help="renewal horizon for the surrogate zones")
    p.add_argument("--tol", type=float, default=0.05,
                   help="relative error budget for Green values")


def _get_evaluator(args) -> GreenEvaluator:
    spec = _spec_from(args)
    cache_dir = os.environ.get("SUBWALK_CACHE")
    path = None
    if cache_dir and spec.is_power:
        os.makedirs(cache_dir, exist_ok=True)
        tag = (f"geval_a{args.alpha:g}_K{args.k1}_R{args.box_radius}"
               f"_N{args.n_renewal}_v1.npz")
        path = os.path.join(cache_dir, tag)
    if path and os.path.exists(path):
        z = np.load(path)
        coeffs = SubordinationCoefficients(
            spec=spec, values=z["c"], N=int(z["meta"][0]),
            alpha=args.alpha, tail_exponent=1.0 + args.alpha / 2.0)
        ren = RenewalSequence(
            spec=spec, values=z["C"], alpha=args.alpha, source="recurrence",
            exact_to=int(z["meta"][0]), bias_bound=float(z["scal"][5]))
        return GreenEvaluator(
            spec=spec, coeffs=coeffs, renewal=ren, table=None,
            acc=z["acc"], deficits=z["deficits"], center=z["center"],
            K1=args.k1, box_radius=args.box_radius, A=4.0,
            tolerance=args.tol, c1=float(z["scal"][0]),
            b0=float(z["scal"][1]), b0_resid=float(z["scal"][2]),
            aeff_mean=float(z["scal"][3]), aeff_spread=float(z["scal"][4]))
    ev = build_evaluator(spec, K1=args.k1, box_radius=args.box_radius,
                         n_renewal=args.n_renewal, tolerance=args.tol)
    if path:
        np.savez_compressed(
            path, c=ev.coeffs.values, C=ev.renewal.values, acc=ev._acc,
            deficits=ev._deficits, center=ev._center,
            meta=np.array([ev.n_renewal]),
            scal=np.array([ev.c1, ev.b0, ev.b0_resid, ev.aeff_mean,
                           ev.aeff_spread, ev.renewal.bias_bound]))
    return ev


# ---------------------------------------------------------------------------
# subcommands

def cmd_coeffs(args) -> None:
    spec = _spec_from(args)
    cf = coefficients(spec, args.n)
    sums = cf.partial_sums()
    rows = [(n, float(cf.values[n]), float(sums[n]))
            for n in range(1, args.n + 1)]
    doc = {
        "manifest": _manifest(args, "coeffs"),
        "rows": [{"n": n, "c": c, "partial_sum": s} for n, c, s in rows],
    }
    _emit(args, doc, ["n", "c", "partial_sum"], rows)


def cmd_green(args) -> None:
    if args.alpha >= args.dim:
        raise DomainError(
            f"recurrent regime: alpha={args.alpha:g} >= d={args.dim}")
    if args.dim != 3:
        raise DomainError("green evaluation supports --dim 3")
    x = _parse_vector(args.x)
    ev = _get_evaluator(args)
    gv = ev.green(x)
    full = ev.green_full(x)
    r2 = float(sum(v * v for v in x))
    ratio = None
    if r2 > 0:
        r = r2 ** 0.5
        ratio = gv.value * r ** args.dim * ev.spec(1.0 / r2) \
            / asymptotic_constant(args.dim, args.alpha)
    doc = {
        "manifest": _manifest(args, "green"),
        "x": list(x),
        "value": gv.value,
        "error_bound": gv.bound,
        "green_full": full.value,
        "ratio_to_asymptotic": ratio,
        "parts": gv.parts,
    }
    _emit(args, doc, ["x", "value", "error_bound", "green_full", "ratio"],
          [[args.x, gv.value, gv.bound, full.value, ratio]])


def cmd_riesz(args) -> None:
    rep = riesz_ratio_report(args.dim, args.alpha)
    ev = _get_evaluator(args)
    rows = []
    for r in (int(v) for v in args.radii.split(",")):
        g = ev.green((r, 0, 0)).value
        from .green import riesz_constant
        emp = riesz_constant(args.dim, args.alpha) \
            * float(r) ** (args.alpha - args.dim) / g
        rows.append((r, emp))
    doc = {
        "manifest": _manifest(args, "riesz"),
        "empirical_ratio": {str(r): v for r, v in rows},
        "algebraic": rep,
        "note": ("the (2/d)^(alpha/2) closed form does not match A/C; "
                 "the algebra gives (2d)^(-alpha/2)"),
    }
    _emit(args, doc, ["r", "empirical_ratio"], rows)


def cmd_capacity(args) -> None:
    setspec = parse_set(args.set, args.dim)
    ps = _finite_points(setspec)
    ev = _get_evaluator(args)
    if args.method == "lp":
        res = capacity_variational(ev, ps)
    else:
        res = equilibrium(ev, ps, method=args.method)
    res.meta["set"] = args.set
    doc = json.loads(res.to_json())
    doc["manifest"] = _manifest(args, "capacity")
    _emit(args, doc, ["set", "n_points", "capacity", "residual", "method"],
          [[args.set, res.n_points, res.capacity, res.residual, res.method]])


def cmd_wiener(args) -> None:
    setspec = parse_set(args.set, args.dim)
    ev = _get_evaluator(args)
    report = wiener_test(ev, setspec, range(args.kmin, args.kmax + 1),
                         budget_points=args.budget_points)
    doc = json.loads(report.to_json())
    doc["manifest"] = _manifest(args, "wiener")
    rows = [[r.k, r.size, r.capacity, r.chi, r.term, r.partial_sum,
             int(r.subsampled)] for r in report.rows]
    _emit(args, doc,
          ["k", "size", "capacity", "chi", "term", "partial_sum",
           "subsampled"], rows)


def _profile_from(args):
    if args.profile == "linear":
        return LinearThorn(args.delta)
    if args.profile == "power":
        return PowerThorn(args.gamma_profile)
    if args.profile == "linoverlog":
        return LinOverLogThorn(args.beta)
    if args.profile == "table":
        return TableThorn(tuple(float(v) for v in args.values.split(",")))
    raise DomainError(f"unknown profile {args.profile!r}")


def cmd_thorn(args) -> None:
    prof = _profile_from(args)
    if not prof.is_thin:
        fat = fat_thorn_rule(prof, args.dim, args.alpha)
        doc = {
            "manifest": _manifest(args, "thorn"),
            "verdict": "massive",
            "route": "fat-thorn rule",
            "delta": fat.delta,
            "witnesses": [
                {"k": k, "center_height": h, "radius": r}
                for k, h, r in fat.witnesses],
        }
        _emit(args, doc, ["k", "center_height", "radius"],
              [list(w) for w in fat.witnesses])
        return
    res = thorn_series_terms(prof, args.dim, args.alpha,
                             range(1, args.nmax + 1))
    verdict = {"Massive": "massive", "NonMassive": "non-massive"}.get(
        res.verdict, "inconclusive")
    doc = {
        "manifest": _manifest(args, "thorn"),
        "verdict": verdict,
        "route": "thin-thorn series",
        "closed_form": res.closed_form,
        "terms": [{"n": int(n), "term": float(t)}
                  for n, t in zip(res.n_range, res.terms)],
    }
    _emit(args, doc, ["n", "term"],
          [[int(n), float(t)] for n, t in zip(res.n_range, res.terms)])


def cmd_hyperplane(args) -> None:
    eps = [float(v) for v in args.epsilons.split(",")]
    res = hyperplane_return_sum(args.dim, args.alpha, eps)
    doc = {
        "manifest": _manifest(args, "hyperplane"),
        "classification": res.classification,
        "growth_per_decade": res.growth_per_decade,
        "rows": [{"epsilon": e, "integral": v} for e, v in res.rows],
    }
    _emit(args, doc, ["epsilon", "integral"], [list(r) for r in res.rows])


def _parse_stopping(text: str):
    kind, _, rest = text.partition(":")
    try:
        if kind == "horizon":
            return Horizon(int(rest))
        if kind == "escape":
            if "," in rest:
                r, mx = rest.split(",")
                return EscapeRadius(float(r), int(mx))
            return EscapeRadius(float(rest))
    except ValueError:
        pass
    raise DomainError(f"cannot parse stopping rule {text!r} "
                      "(use horizon:N or escape:R[,MAXSTEPS])")


def cmd_simulate(args) -> None:
    setspec = parse_set(args.set, args.dim)
    cfg = SimConfig(d=args.dim, spec=_spec_from(args),
                    start=_parse_vector(args.start), trials=args.trials,
                    stopping=_parse_stopping(args.stopping),
                    master_seed=args.seed)
    est = hitting_probability(cfg, setspec, n_table=args.n_table)
    doc = json.loads(est.to_json(set_name=args.set, start=cfg.start))
    doc["manifest"] = _manifest(args, "simulate")
    _emit(args, doc,
          ["set", "start", "trials", "hits", "estimate", "ci_low", "ci_high"],
          [[args.set, args.start, est.trials, est.hits, est.point_estimate,
            est.ci_low, est.ci_high]])


# ---------------------------------------------------------------------------
# parser

def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="subwalk",
        description="Subordinated random walks on Z^d: coefficients, Green "
                    "functions, capacities, massiveness tests, simulation.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="subcommand", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None, help="also write to this file")
        p.add_argument("--threads", type=int, default=None,
                       help="cap worker threads")

    p = sub.add_parser("coeffs", help="subordination coefficients c(psi, n)")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--gamma", type=float, default=None,
                   help="log correction exponent (selects the log-power family)")
    p.add_argument("--n", type=int, default=16)
    common(p)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("green", help="Green function with error bound")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--x", required=True, help="comma-separated point")
    _add_evaluator_flags(p)
    common(p)
    p.set_defaults(func=cmd_green)

    p = sub.add_parser("riesz", help="continuous-kernel amplitude ratio")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--radii", default="40,60,80")
    _add_evaluator_flags(p)
    common(p)
    p.set_defaults(func=cmd_riesz)

    p = sub.add_parser("capacity", help="capacity of a finite set")
    p.add_argument("--set", required=True)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--method", choices=("auto", "dense", "cg", "lp"),
                   default="auto")
    _add_evaluator_flags(p)
    common(p)
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("wiener", help="dyadic-shell Wiener test")
    p.add_argument("--set", required=True)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--kmin", type=int, default=1)
    p.add_argument("--kmax", type=int, default=6)
    p.add_argument("--budget-points", type=int, default=30000)
    _add_evaluator_flags(p)
    common(p)
    p.set_defaults(func=cmd_wiener)

    p = sub.add_parser("thorn", help="analytic thorn massiveness criterion")
    p.add_argument("--profile", required=True,
                   choices=("linear", "power", "linoverlog", "table"))
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--gamma-profile", type=float, default=0.5)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--values", default="")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--nmax", type=int, default=24)
    common(p)
    p.set_defaults(func=cmd_thorn)

    p = sub.add_parser("hyperplane", help="hyperplane transience integral")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--epsilons", default="1e-2,1e-3,1e-4,1e-5")
    common(p)
    p.set_defaults(func=cmd_hyperplane)

    p = sub.add_parser("simulate", help="Monte Carlo hitting probability")
    p.add_argument("--set", required=True)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--gamma", type=float, default=None)
    p.add_argument("--start", required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stopping", default="horizon:100000")
    p.add_argument("--n-table", type=int, default=4096)
    common(p)
    p.set_defaults(func=cmd_simulate)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if getattr(args, "threads", None):
        os.environ.setdefault("OMP_NUM_THREADS", str(args.threads))
        try:
            import numba
            numba.set_num_threads(args.threads)
        except (ImportError, ValueError):
            pass
    try:
        args.func(args)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 2
    except BudgetError as exc:
        # str(exc) already carries the suggestion appended by __init__
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
