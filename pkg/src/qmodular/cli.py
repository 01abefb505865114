"""qmodular command line: forms, geodesics, eval, grid, cinfty, verify."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import maass, qforms, series, theta, verify
from .qforms import Params
from .series import TruncationPolicy

SCHEMA = "qmodular/1"
FUNCTIONS = ("f", "psi", "phi", "rho", "lambda", "omega", "bigomega", "Lambda", "Psi",
             "eichler-hol", "eichler-nonhol", "theta")
GRID_HEADER = ["u", "v", "re", "im", "component_hash", "est_error", "on_ED"]

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_NONCONVERGENCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class NonConvergence(Exception):
    pass


def _complex(pair, name):
    if pair is None:
        raise UsageError(f"--{name} RE IM is required")
    return complex(pair[0], pair[1])


def _params(args) -> Params:
    try:
        return Params(args.disc, args.k)
    except ValueError as e:
        raise UsageError(str(e))


def _policy(args) -> TruncationPolicy:
    try:
        return TruncationPolicy(args.bound_a, True, args.tol)
    except ValueError as e:
        raise UsageError(str(e))


def evaluate(fn: str, params: Params, policy: TruncationPolicy, tau=None, w=None, z=None,
             kappa: int | None = None):
    """Dispatch one evaluation; returns a SeriesValue-like object with value and est_error."""
    if fn == "f":
        return series.eval_f(params, kappa or 2 * params.k, tau, policy)
    if fn == "psi":
        return series.eval_psi(params, tau, policy)
    if fn == "phi":
        return series.eval_phi(params, tau, policy)
    if fn == "rho":
        return series.eval_rho(params, tau, w, policy)
    if fn == "lambda":
        return series.eval_lambda_pair(params, tau, w, policy)
    if fn == "omega":
        return series.eval_omega(params, tau, z, policy)
    if fn == "bigomega":
        return series.eval_Omega(params, tau, w, policy)
    if fn == "Lambda":
        return series.eval_Lambda(params, tau, policy)
    if fn == "Psi":
        return maass.eval_Psi(params, tau, policy)
    if fn == "eichler-hol":
        return maass.eichler_hol(params, tau, policy)
    if fn == "eichler-nonhol":
        return maass.eichler_nonhol(params, tau, policy)
    if fn == "theta":
        return theta.eval_theta_kernel(params.k, tau, z, min(policy.target_tol, 1e-12))
    raise UsageError(f"unknown function {fn!r}")


def _needs(fn: str) -> tuple[bool, bool, bool]:
    """(tau, w, z) requirements of each function."""
    return (True, fn in ("rho", "lambda", "bigomega"), fn in ("omega", "theta"))


def _emit(obj, out):
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_forms(args) -> int:
    params = _params(args)
    forms = qforms.enumerate_forms(params, args.bound_a)
    _emit({"schema": SCHEMA, "D": params.D, "bound_a": args.bound_a,
           "count": len(forms), "forms": [Q.to_list() for Q in forms]}, args.out)
    return EXIT_OK


def cmd_geodesics(args) -> int:
    params = _params(args)
    forms = [Q for Q in qforms.enumerate_forms(params, args.bound_a) if Q.a > 0]
    _emit({"schema": SCHEMA, "D": params.D, "bound_a": args.bound_a,
           "geodesics": [qforms.geodesic(Q).to_dict() for Q in forms]}, args.out)
    return EXIT_OK


def cmd_eval(args) -> int:
    params, policy = _params(args), _policy(args)
    fn = args.fn
    nt, nw, nz = _needs(fn)
    tau = _complex(args.tau, "tau")
    w = _complex(args.w, "w") if nw else None
    z = _complex(args.z, "z") if nz else None
    try:
        val = evaluate(fn, params, policy, tau, w, z, args.kappa)
    except ValueError as e:
        raise UsageError(str(e))
    est = float(val.est_error)
    obj = {"schema": SCHEMA, "fn": fn, "D": params.D, "k": params.k, "bound_a": policy.bound_a,
           "tau": [tau.real, tau.imag], "value": [val.value.real, val.value.imag],
           "est_error": est, "tol": policy.target_tol}
    if w is not None:
        obj["w"] = [w.real, w.imag]
    if z is not None:
        obj["z"] = [z.real, z.imag]
    if hasattr(val, "notes") and val.notes:
        obj["notes"] = list(val.notes)
    if not math.isfinite(val.value.real) or not math.isfinite(val.value.imag):
        raise NonConvergence(f"{fn} is not finite at {tau}")
    converged = getattr(val, "converged", est <= policy.target_tol)
    obj["converged"] = bool(converged)
    _emit(obj, args.out)
    return EXIT_OK if converged else EXIT_NONCONVERGENCE


GRID_FUNCTIONS = ("f", "psi", "phi", "Lambda", "Psi", "eichler-hol", "eichler-nonhol")


def grid_rows(params: Params, policy: TruncationPolicy, fn: str, nx: int, ny: int,
              u_range=(-0.5, 0.5), v_range=(0.4, 2.0)):
    """Rows (u, v, re, im, component_hash, est_error, on_ED), u fastest."""
    us = np.linspace(*u_range, nx)
    vs = np.linspace(*v_range, ny)
    for v in vs:
        for u in us:
            tau = complex(float(u), float(v))
            on = qforms.on_exceptional_set(params, tau, 1e-9)
            if on:
                # two-sided averages are defined for Lambda and Psi; the component is not
                h = ""
            else:
                h = qforms.signature_hash(qforms.component_signature(params, tau))
            if on and fn not in ("Lambda", "Psi"):
                yield [float(u), float(v), "nan", "nan", h, "nan", 1]
                continue
            try:
                val = evaluate(fn, params, policy, tau)
                re, im, est = val.value.real, val.value.imag, val.est_error
            except ValueError:
                re = im = est = float("nan")
            yield [float(u), float(v), repr(float(re)), repr(float(im)), h, repr(float(est)), int(on)]


def cmd_grid(args) -> int:
    params, policy = _params(args), _policy(args)
    if args.fn not in GRID_FUNCTIONS:
        raise UsageError(f"grid supports --fn {'|'.join(GRID_FUNCTIONS)}")
    if args.nx < 1 or args.ny < 1:
        raise UsageError("--nx and --ny must be positive")
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(GRID_HEADER)
    for row in grid_rows(params, policy, args.fn, args.nx, args.ny):
        wr.writerow(row)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_cinfty(args) -> int:
    params = _params(args)
    c = maass.c_infinity(params, args.tol)
    obj = {"schema": SCHEMA, "D": params.D, "k": params.k}
    obj.update(c.to_dict())
    _emit(obj, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    params, policy = _params(args), _policy(args)
    names = verify.SUITES if args.suite == "all" else (args.suite,)
    if args.suite != "all" and args.suite not in verify.SUITES:
        raise UsageError(f"unknown suite {args.suite!r}")
    results = []
    for name in names:
        reps = verify.suite_run(name, params, args.seed, policy, workers=args.workers)
        results.append(verify.reports_json(reps, params, name, args.seed))
    obj = results[0] if len(results) == 1 else {"schema": SCHEMA, "suites": results,
                                                "passed": all(r["passed"] for r in results)}
    _emit(obj, args.out)
    return EXIT_OK if all(r["passed"] for r in results) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qmodular", description="Modular objects attached to indefinite binary quadratic forms.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--disc", type=int, default=5, help="discriminant D (positive, non-square)")
    common.add_argument("--k", type=int, default=2, help="even weight parameter k >= 2")
    common.add_argument("--bound-a", dest="bound_a", type=int, default=64)
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--seed", type=int, default=1)
    common.add_argument("--out", default=None, help="output file (stdout if omitted)")
    sub = ap.add_subparsers(dest="cmd", required=True)

    sub.add_parser("forms", parents=[common], help="list forms of discriminant D with |a| <= bound-a")
    sub.add_parser("geodesics", parents=[common], help="list geodesics S_Q for a > 0")
    p = sub.add_parser("eval", parents=[common], help="evaluate one function at a point")
    p.add_argument("--fn", required=True, choices=FUNCTIONS)
    p.add_argument("--tau", nargs=2, type=float, metavar=("RE", "IM"))
    p.add_argument("--w", nargs=2, type=float, metavar=("RE", "IM"))
    p.add_argument("--z", nargs=2, type=float, metavar=("RE", "IM"))
    p.add_argument("--kappa", type=int, default=None, help="exponent for --fn f (default 2k)")
    p = sub.add_parser("grid", parents=[common], help="CSV grid of values for plotting")
    p.add_argument("--fn", required=True, choices=FUNCTIONS)
    p.add_argument("--nx", type=int, default=50)
    p.add_argument("--ny", type=int, default=50)
    sub.add_parser("cinfty", parents=[common], help="the limit constant of Psi at i infinity")
    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", default="all", help="|".join(verify.SUITES) + "|all")
    p.add_argument("--workers", type=int, default=1)
    return ap


COMMANDS = {"forms": cmd_forms, "geodesics": cmd_geodesics, "eval": cmd_eval,
            "grid": cmd_grid, "cinfty": cmd_cinfty, "verify": cmd_verify}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return COMMANDS[args.cmd](args)
    except UsageError as e:
        print(f"qmodular: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (NonConvergence, ArithmeticError) as e:
        print(f"qmodular: non-convergence: {e}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
