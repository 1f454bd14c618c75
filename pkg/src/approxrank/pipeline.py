"""End-to-end construction of a low-rank matrix in the alpha-band of a sign matrix.

Stages: gamma_2^alpha SDP -> Gram factorization -> random projection with
t = (alpha - 1) / (2 alpha) -> rescaling into [1, 2 alpha - 1] -> cubic
sharpening back into [1, alpha]. The result carries the certified sandwich
``gamma_2^alpha^2 / alpha^2 <= rk_alpha(A) <= rank(B)``.
"""
import hashlib
import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from .dimreduce import (
    DEFAULT_MAX_TRIALS, ReductionPlan, k_prime_statement, plan_k_prime,
    project_las_vegas, rescale_to_band, should_skip,
)
from .errors import ApproxRankError, SignViolation, ValidationError
from .linalg import as_sign_matrix, numerical_rank
from .matrix_io import format_matrix
from .norms import ApproxBand, NormCertificate, gamma2_alpha, nu_alpha, nu_upper_bound
from .oracle import MAX_ATOM_BITS
from .polyreduce import rank_bound_after_poly, sharpen


@dataclass(frozen=True)
class PipelineConfig:
    tol: float = 1e-8
    max_trials: int = DEFAULT_MAX_TRIALS
    force_k: int | None = None
    nu_mode: str = "auto"  # auto | exact | bound
    band_tol: float = 1e-8
    wall_clock: bool = False

    def __post_init__(self):
        if self.nu_mode not in ("auto", "exact", "bound"):
            raise ValidationError(f"unknown nu_mode {self.nu_mode!r}")
        if self.force_k is not None and self.force_k < 1:
            raise ValidationError("force_k must be positive")


@dataclass
class ApproxResult:
    A: np.ndarray
    B: np.ndarray
    alpha: float
    seed: int
    rank: int
    band_min: float
    band_max: float
    lower_bound: float
    theorem1_upper: float
    gamma2_alpha: NormCertificate
    nu: dict
    reduction: dict
    poly: dict
    work: dict = field(default_factory=dict)

    def report(self) -> dict:
        m, n = self.A.shape
        return {
            "input": {"m": m, "n": n, "hash": matrix_hash(self.A)},
            "alpha": self.alpha,
            "seed": self.seed,
            "gamma2_alpha": {
                "value": self.gamma2_alpha.value,
                "lower": self.gamma2_alpha.lower,
                "upper": self.gamma2_alpha.upper,
                "gap": self.gamma2_alpha.gap,
            },
            "nu": self.nu,
            "reduction": self.reduction,
            "poly": self.poly,
            "result": {"rank": self.rank, "band_min": self.band_min, "band_max": self.band_max},
            "bounds": {"lower": self.lower_bound, "theorem1_upper": self.theorem1_upper},
            "timings": self.work,
        }


def matrix_hash(A) -> str:
    return hashlib.sha256(format_matrix(A).encode()).hexdigest()


def theorem1_upper(g: float, alpha: float, m: int, n: int) -> float:
    return 8192.0 * alpha**6 / (alpha - 1) ** 6 * math.log(4 * m * n) ** 3 * g**6


def theorem1_bounds(A, alpha: float, tol: float = 1e-8, cert: NormCertificate | None = None):
    """(gamma^2 / alpha^2 from the dual end, the polylog upper form from the primal end)."""
    A = as_sign_matrix(A)
    band = ApproxBand(alpha)
    if cert is None:
        cert, _ = gamma2_alpha(A, band, tol)
    m, n = A.shape
    return cert.lower**2 / alpha**2, theorem1_upper(cert.upper, alpha, m, n)


@contextmanager
def _stage(name, diagnostics):
    try:
        yield
    except ApproxRankError as exc:
        exc.stage = name
        exc.diagnostics = dict(diagnostics)
        raise


def approximate_rank_pipeline(A, alpha: float, seed: int = 0,
                              config: PipelineConfig | None = None) -> ApproxResult:
    config = config or PipelineConfig()
    A = as_sign_matrix(A)
    band = ApproxBand(alpha)
    m, n = A.shape
    diag = {"m": m, "n": n, "alpha": alpha, "seed": seed}
    clock = {}
    t0 = time.perf_counter()

    with _stage("gamma2_alpha", diag):
        cert, witness = gamma2_alpha(A, band, config.tol)
    diag["gamma2_alpha"] = cert.upper
    clock["gamma2_alpha"] = time.perf_counter() - t0

    f = cert.primal  # Gram factorization of the witness, built inside gamma2_alpha
    k = f.k

    t = (alpha - 1) / (2 * alpha)
    with _stage("plan", diag):
        nu_info, k_planned = _plan(A, band, cert, t, config)
    diag["k_prime"] = k_planned
    k_used = config.force_k if config.force_k is not None else k_planned
    skipped = config.force_k is None and should_skip(k_used, k, m, n)

    t1 = time.perf_counter()
    if skipped:
        M, err, trials = witness, 0.0, 0
    else:
        plan = ReductionPlan(t=t, k_prime=k_used, max_trials=config.max_trials, seed=seed)
        with _stage("project", diag):
            g, _, err, trials = project_las_vegas(f, witness, plan)
        M = g.product()
    clock["project"] = time.perf_counter() - t1

    with _stage("rescale", diag):
        M = rescale_to_band(M, A, err)
    with _stage("sharpen", diag):
        sh = sharpen(M, A, alpha)
    B = sh.B
    P = A * B
    band_min, band_max = float(P.min()), float(P.max())
    if band_min < 1 - config.band_tol or band_max > alpha + config.band_tol:
        exc = SignViolation(f"output band [{band_min}, {band_max}] leaves [1, {alpha}]")
        exc.stage, exc.diagnostics = "verify", dict(diag)
        raise exc

    rank = numerical_rank(B)
    lower = cert.lower**2 / alpha**2
    upper = theorem1_upper(cert.upper, alpha, m, n)
    rank_cap = None
    if not skipped:
        rank_cap = k_used
        for _ in sh.epsilons:
            rank_cap = rank_bound_after_poly(rank_cap)
    work = {
        "sdp_iterations": int(cert.info.get("iterations", 0)),
        "projection_trials": trials,
        "poly_iterations": sh.iterations,
    }
    if config.wall_clock:
        clock["total"] = time.perf_counter() - t0
        work["wall_seconds"] = clock
    return ApproxResult(
        A=A, B=B, alpha=float(alpha), seed=int(seed), rank=rank,
        band_min=band_min, band_max=band_max, lower_bound=lower, theorem1_upper=upper,
        gamma2_alpha=cert, nu=nu_info,
        reduction={
            "t": t, "k_prime": int(k_used), "k_prime_planned": int(k_planned),
            "k_prime_statement": k_prime_statement(cert.upper, m, n, t),
            "forced": config.force_k is not None, "inner_dim": int(k),
            "skipped": bool(skipped), "trials": int(trials), "achieved_error": float(err),
            "rank_cap": rank_cap,
        },
        poly={
            "epsilon": sh.epsilons[0] if sh.epsilons else None,
            "epsilons": list(sh.epsilons),
            "a1": 1 + _a3(sh.epsilons[0]) if sh.epsilons else None,
            "a3": _a3(sh.epsilons[0]) if sh.epsilons else None,
            "iterations": sh.iterations,
            "band_in": list(sh.band_in),
        },
        work=work,
    )


def _a3(eps):
    return 1.0 / (2.0 + 6.0 * eps + 4.0 * eps**2)


def _plan(A, band, cert, t, config):
    """Choose nu^alpha (exact LP or the factor-2 bound) and the planned k'."""
    m, n = A.shape
    k_cap = min(cert.primal.k, m, n)
    atoms_ok = m + n - 1 <= MAX_ATOM_BITS
    mode = config.nu_mode
    if mode == "auto":
        # nu^alpha >= gamma_2^alpha: if even the lower end already exceeds the cap,
        # the exact value cannot change the outcome
        implied = plan_k_prime(max(1.0, cert.lower), m, n, t) >= k_cap
        mode = "exact" if atoms_ok and not implied and config.force_k is None else "bound"
    if mode == "exact":
        ncert, _ = nu_alpha(A, band)
        value = max(1.0, ncert.value)
        info = {"value": ncert.value, "lower": ncert.lower, "upper_bound_used": None, "method": "exact"}
    else:
        value = max(1.0, nu_upper_bound(cert.upper))
        info = {"value": None, "lower": None, "upper_bound_used": value, "method": "2*gamma2_alpha"}
    return info, plan_k_prime(value, m, n, t)
