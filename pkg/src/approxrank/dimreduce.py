"""Random +/-1 projection of a factorization, verified trial by trial.

A factorization ``X.T @ Y`` with inner dimension k is compressed to
``(R.T X).T (R.T Y)`` where R is k x k' with entries +/-1/sqrt(k'). The
product is unbiased, and for layered factorizations the entrywise error is
controlled through Hoeffding's inequality. Each trial is checked against the
target in the max norm and redrawn on failure.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .errors import SignViolation, TrialsExhausted, ValidationError
from .factorize import Factorization, make_factorization

DEFAULT_MAX_TRIALS = 64


@dataclass(frozen=True)
class ReductionPlan:
    t: float
    k_prime: int
    max_trials: int = DEFAULT_MAX_TRIALS
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.t < 1:
            raise ValidationError(f"t must lie in (0, 1), got {self.t}")
        if int(self.k_prime) != self.k_prime or self.k_prime < 1:
            raise ValidationError(f"k_prime must be a positive integer, got {self.k_prime}")
        if self.max_trials < 1:
            raise ValidationError("max_trials must be positive")


@dataclass(frozen=True)
class ProjectionSketch:
    R: np.ndarray
    seed: int
    trial: int


def plan_k_prime(nu_alpha: float, m: int, n: int, t: float) -> int:
    """ceil(2 nu^2 ln(4mn) / t^2): per-entry failure below 1/(2mn)."""
    if nu_alpha < 1:
        raise ValidationError("nu_alpha must be at least 1 for a sign matrix")
    if not 0 < t < 1:
        raise ValidationError("t must lie in (0, 1)")
    return int(math.ceil(2.0 * nu_alpha**2 * math.log(4 * m * n) / t**2))


def k_prime_statement(g2_alpha: float, m: int, n: int, t: float) -> float:
    """The alternative dimension 4 gamma_2^alpha^2 ln(4mn) / t^2, reported alongside the plan."""
    return 4.0 * g2_alpha**2 * math.log(4 * m * n) / t**2


def hoeffding_tail(coeffs, t: float) -> float:
    """Bound on Pr[|sum a_i delta_i| > t] for independent uniform signs delta_i."""
    if t < 0:
        raise ValidationError("t must be nonnegative")
    a = np.asarray(coeffs, dtype=float)
    var = float(np.sum(a * a))
    if var == 0.0:
        return 2.0 if t == 0 else 0.0
    return 2.0 * math.exp(-t * t / (2.0 * var))


def draw_sketch(k: int, k_prime: int, seed: int, trial: int = 0) -> ProjectionSketch:
    R = rng.signs((k, k_prime), seed, trial) / math.sqrt(k_prime)
    return ProjectionSketch(R=R, seed=seed, trial=trial)


def project(f: Factorization, plan: ReductionPlan, trial: int = 0):
    sk = draw_sketch(f.k, plan.k_prime, plan.seed, trial)
    return make_factorization(sk.R.T @ f.X, sk.R.T @ f.Y), sk


def should_skip(k_prime: int, k: int, m: int, n: int) -> bool:
    """Projection cannot lower the rank below the trivial bounds."""
    return k_prime >= k or k_prime >= min(m, n)


def project_las_vegas(f: Factorization, target, plan: ReductionPlan):
    """First trial whose product is within ``plan.t`` of ``target`` entrywise.

    Returns ``(factorization, sketch, achieved_error, trials_used)``.
    """
    target = np.asarray(target, dtype=float)
    if f.product().shape != target.shape:
        raise ValidationError("factorization and target shapes differ")
    if np.max(np.abs(f.product() - target)) > 1e-6:
        raise ValidationError("factorization does not reproduce the target")
    best = None
    best_err = math.inf
    for trial in range(plan.max_trials):
        g, sk = project(f, plan, trial)
        err = float(np.max(np.abs(g.product() - target)))
        if err < best_err:
            best, best_err = (g, sk), err
        if err <= plan.t:
            return g, sk, err, trial + 1
    raise TrialsExhausted(
        f"no trial within t={plan.t} after {plan.max_trials} trials (best {best_err:.4g})",
        best=best, best_error=best_err, trials=plan.max_trials,
    )


def rescale_to_band(M, A, t: float):
    """M / (1 - t), after checking that A o M >= 1 - t everywhere."""
    M = np.asarray(M, dtype=float)
    A = np.asarray(A, dtype=float)
    if not 0 <= t < 1:
        raise ValidationError("t must lie in [0, 1)")
    P = A * M
    bad = np.argwhere(P < 1 - t)
    if bad.size:
        entries = [(int(i), int(j), float(P[i, j])) for i, j in bad]
        raise SignViolation(f"{len(entries)} entries fall below 1 - t = {1 - t}", entries)
    return M / (1 - t)
