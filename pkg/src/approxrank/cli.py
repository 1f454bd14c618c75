"""Command-line interface. Every command reads the matrix text format and
prints JSON. Exit codes: 0 success, 1 band check failed (``verify``),
2 invalid input, 3 numerical or randomized-stage failure."""
import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .dimreduce import ReductionPlan, plan_k_prime, project_las_vegas, should_skip
from .errors import ApproxRankError, NumericalFailure, SignViolation, TrialsExhausted, ValidationError
from .factorize import layered_from_nu
from .linalg import as_sign_matrix
from .matrix_io import read_matrix, write_matrix
from .norms import ApproxBand, gamma2, gamma2_alpha, nu, nu_alpha, nu_upper_bound
from .oracle import MAX_ATOM_BITS, atom_count, is_rank_alpha_one, verify_band
from .pipeline import PipelineConfig, approximate_rank_pipeline, theorem1_bounds

MAX_DIM = 128


def _jsonable(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    raise TypeError(f"not JSON serializable: {type(o)}")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, default=_jsonable) + "\n"


def _load(path, sign=False):
    M = read_matrix(path, sign=sign)
    if max(M.shape) > MAX_DIM:
        raise ValidationError(f"{M.shape[0]}x{M.shape[1]} exceeds the {MAX_DIM}x{MAX_DIM} limit")
    return M


def cmd_gamma2(args):
    A = _load(args.file)
    c = gamma2(A, args.tol)
    return {
        "value": c.value, "lower": c.lower, "upper": c.upper, "gap": c.gap,
        "dual": {"u": c.dual.u, "v": c.dual.v, "trace_norm_bound": c.dual.bound},
        "iterations": c.info["iterations"],
    }


def cmd_gamma2_alpha(args):
    A = _load(args.file, sign=True)
    c, W = gamma2_alpha(A, ApproxBand(args.alpha), args.tol)
    out = {"alpha": args.alpha, "value": c.value, "lower": c.lower, "upper": c.upper, "gap": c.gap}
    if args.out:
        write_matrix(args.out, W)
        out["witness"] = str(args.out)
    return out


def _decomposition(cert):
    dec = cert.primal
    keep = np.nonzero(dec.coeffs)[0]
    return [{"coeff": dec.coeffs[i], "x": dec.xs[i], "y": dec.ys[i]} for i in keep]


def cmd_nu(args):
    A = _load(args.file)
    c = nu(A)
    return {"value": c.value, "lower": c.lower, "gap": c.gap, "decomposition": _decomposition(c)}


def cmd_reduce(args):
    A = _load(args.file, sign=True)
    band = ApproxBand(args.alpha)
    m, n = A.shape
    if args.source == "nu":
        ncert, target = nu_alpha(A, band)
        f = layered_from_nu(ncert).to_factorization()
        nu_value = ncert.value
    else:
        cert, target = gamma2_alpha(A, band, args.tol)
        f = cert.primal
        nu_value = nu_upper_bound(cert.upper)
    k_planned = plan_k_prime(max(1.0, nu_value), m, n, args.t)
    k = args.k if args.k is not None else k_planned
    out = {"t": args.t, "source": args.source, "nu_used": nu_value, "k_prime_planned": k_planned,
           "k_prime": k, "inner_dim": f.k}
    if args.k is None and should_skip(k, f.k, m, n):
        out.update(skipped=True, trials=0, achieved_error=0.0)
        return out
    plan = ReductionPlan(t=args.t, k_prime=k, max_trials=args.max_trials, seed=args.seed)
    _, _, err, trials = project_las_vegas(f, target, plan)
    out.update(skipped=False, trials=trials, achieved_error=err)
    return out


def cmd_pipeline(args):
    A = _load(args.file, sign=True)
    cfg = PipelineConfig(tol=args.tol, max_trials=args.max_trials, force_k=args.force_k,
                         nu_mode=args.nu_mode, wall_clock=args.timings)
    res = approximate_rank_pipeline(A, args.alpha, args.seed, cfg)
    rep = res.report()
    if args.b_out:
        write_matrix(args.b_out, res.B)
    if args.out:
        Path(args.out).write_text(dumps(rep))
    return rep


def cmd_bounds(args):
    A = _load(args.file, sign=True)
    lo, hi = theorem1_bounds(A, args.alpha, args.tol)
    return {"alpha": args.alpha, "lower": lo, "theorem1_upper": hi}


def cmd_verify(args):
    A = _load(args.a_file, sign=True)
    B = _load(args.b_file)
    rep = verify_band(A, B, args.alpha, args.tol)
    return rep.to_dict(), (0 if rep.passed else 1)


def cmd_oracle(args):
    A = _load(args.file, sign=True)
    m, n = A.shape
    out = {"m": m, "n": n, "atoms": atom_count(m, n)}
    if m + n - 1 <= MAX_ATOM_BITS:
        c = nu(A)
        out["nu"] = {"value": c.value, "lower": c.lower, "decomposition": _decomposition(c)}
    else:
        out["nu"] = None
    if args.alpha is not None and m <= 4 and n <= 4:
        out["rank_alpha_one"] = is_rank_alpha_one(A, args.alpha)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="approxrank", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def cmd(name, fn, help_):
        sp_ = sub.add_parser(name, help=help_)
        sp_.set_defaults(fn=fn)
        return sp_

    s = cmd("gamma2", cmd_gamma2, "gamma_2 norm with certificates")
    s.add_argument("file")
    s.add_argument("--tol", type=float, default=1e-8)

    s = cmd("gamma2-alpha", cmd_gamma2_alpha, "gamma_2^alpha and its band witness")
    s.add_argument("file")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--out", help="write the witness matrix here")

    s = cmd("nu", cmd_nu, "exact nu norm by atom LP")
    s.add_argument("file")

    s = cmd("reduce", cmd_reduce, "random-projection stage alone")
    s.add_argument("file")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--k", type=int, help="forced target dimension")
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--max-trials", type=int, default=64)
    s.add_argument("--source", choices=("gamma2", "nu"), default="gamma2",
                   help="factorization to project: SDP Gram root or layered nu^alpha")
    s.add_argument("--tol", type=float, default=1e-8)

    s = cmd("pipeline", cmd_pipeline, "full construction with rank sandwich")
    s.add_argument("file")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--force-k", type=int)
    s.add_argument("--max-trials", type=int, default=64)
    s.add_argument("--nu-mode", choices=("auto", "exact", "bound"), default="auto")
    s.add_argument("--tol", type=float, default=1e-8)
    s.add_argument("--out", help="write the JSON report here")
    s.add_argument("--b-out", help="write the approximant B here")
    s.add_argument("--timings", action="store_true", help="add wall-clock seconds (not reproducible)")

    s = cmd("bounds", cmd_bounds, "lower and upper sandwich bounds")
    s.add_argument("file")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--tol", type=float, default=1e-8)

    s = cmd("verify", cmd_verify, "check J <= A o B <= alpha J")
    s.add_argument("a_file")
    s.add_argument("b_file")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--tol", type=float, default=1e-8)

    s = cmd("oracle", cmd_oracle, "brute-force facts for tiny sign matrices")
    s.add_argument("file")
    s.add_argument("--alpha", type=float)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = args.fn(args)
    except ValidationError as exc:
        print(f"error [{args.command}]: {exc}", file=sys.stderr)
        return 2
    except (NumericalFailure, TrialsExhausted, SignViolation, ApproxRankError) as exc:
        stage = exc.stage or args.command
        print(f"error [{stage}]: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    code = 0
    if isinstance(out, tuple):
        out, code = out
    sys.stdout.write(dumps(out))
    return code


if __name__ == "__main__":
    sys.exit(main())
