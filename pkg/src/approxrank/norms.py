"""Factorization norms gamma_2, gamma_2^alpha and nu, with certificates.

Every certificate brackets the norm between a primal bound (an explicit
factorization or sign-atom decomposition) and a dual bound (a feasible dual
point, repaired so that feasibility holds in floating point). Both ends are
recomputed from the witnesses, so they stay valid whatever the solver's
residual tolerance.
"""
from dataclasses import dataclass, field

import numpy as np

from .convex import LpProblem, SdpConstraint, SdpProblem, solve_lp, solve_sdp
from .errors import NumericalFailure, ValidationError
from .factorize import Factorization, factor_from_gram
from .linalg import as_matrix, as_sign_matrix, trace_norm
from .oracle import atom_patterns


@dataclass(frozen=True)
class ApproxBand:
    alpha: float

    def __post_init__(self):
        if not self.alpha > 1:
            raise ValidationError(f"alpha must exceed 1, got {self.alpha}")


@dataclass(frozen=True)
class GrothendieckConstants:
    K_lo: float = 1.67
    K_hi: float = 1.7822


GROTHENDIECK = GrothendieckConstants()


@dataclass(frozen=True)
class Decomposition:
    """``sum_k coeffs[k] * outer(xs[k], ys[k])`` over sign vectors."""

    coeffs: np.ndarray
    xs: np.ndarray
    ys: np.ndarray

    def matrix(self) -> np.ndarray:
        return np.einsum("k,ki,kj->ij", self.coeffs, self.xs, self.ys)

    def weight(self) -> float:
        return float(np.abs(self.coeffs).sum())


@dataclass(frozen=True)
class DualWitness:
    W: np.ndarray
    u: np.ndarray | None = None  # column weights (length n)
    v: np.ndarray | None = None  # row weights (length m)
    bound: float = 0.0


@dataclass(frozen=True)
class NormCertificate:
    value: float
    lower: float
    upper: float
    primal: object
    dual: DualWitness
    info: dict = field(default_factory=dict)

    @property
    def gap(self) -> float:
        return self.upper - self.lower


def _sym_entry(i, j, coef=1.0):
    # entry triple with <F, Z> = coef * Z[i, j]
    if i == j:
        return ([i], [i], [coef])
    return ([i, j], [j, i], [coef / 2, coef / 2])


def _gamma2_program(A, alpha=None):
    m, n = A.shape
    d = m + n
    cons = [SdpConstraint(_sym_entry(i, i), {0: -1.0}, "=", 0.0) for i in range(d)]
    for i in range(m):
        for j in range(n):
            if alpha is None:
                cons.append(SdpConstraint(_sym_entry(i, m + j), {}, "=", A[i, j]))
            else:
                F = _sym_entry(i, m + j, A[i, j])
                cons.append(SdpConstraint(F, {}, ">=", 1.0))
                cons.append(SdpConstraint(F, {}, "<=", alpha))
    lam = 2.0 * (1.0 + np.abs(A).max() * (1.0 if alpha is None else alpha)) * max(m, n)
    return SdpProblem(dim=d, n_scalars=1, objective=np.array([1.0]), constraints=cons, start=lam)


def _solve(problem, tol):
    # aim a decade below the certificate tolerance; accept tol itself if that stalls
    try:
        return solve_sdp(problem, tol=tol / 10)
    except NumericalFailure:
        return solve_sdp(problem, tol=tol)


def _primal_side(Z, target, tol):
    """Pin Z's off-diagonal block to ``target``, shift to PSD, factor."""
    m, n = target.shape
    Zc = (Z + Z.T) / 2
    Zc[:m, m:] = target
    Zc[m:, :m] = target.T
    lmin = np.linalg.eigvalsh(Zc)[0]
    shift = max(0.0, -lmin) + 8 * np.finfo(float).eps * max(1.0, np.abs(Zc).max()) * (m + n)
    Zc += shift * np.eye(m + n)
    f = factor_from_gram(Zc, m, n, tol)
    return f, f.norm_product(), shift


def _dual_side(S, m, n):
    """Repair the dual slack to a feasible point; return (W, D1, D2)."""
    d = m + n
    W = -2.0 * S[:m, m:]
    D = np.diag(S).copy()
    Mat = np.zeros((d, d))
    Mat[np.arange(d), np.arange(d)] = D
    Mat[:m, m:] = -W / 2
    Mat[m:, :m] = -W.T / 2
    lmin = np.linalg.eigvalsh(Mat)[0]
    shift = max(0.0, -lmin) + 8 * np.finfo(float).eps * max(1.0, np.abs(Mat).max()) * d
    D = D + shift
    tau = D.sum()
    return W / tau, D[:m] / tau, D[m:] / tau


def _unit(w):
    w = np.sqrt(np.clip(w, 0.0, None))
    nw = np.linalg.norm(w)
    return w / nw if nw > 0 else w


def gamma2(A, tol: float = 1e-8) -> NormCertificate:
    """gamma_2 via the Gram-matrix SDP; the dual end is a unit pair (u, v)."""
    A = as_matrix(A)
    if not np.any(A):
        raise ValidationError("gamma2 needs a nonzero matrix")
    m, n = A.shape
    sol = _solve(_gamma2_program(A), tol)
    f, upper, shift = _primal_side(sol.Z, A, tol)
    W, D1, D2 = _dual_side(sol.S, m, n)
    v, u = _unit(D1), _unit(D2)
    lower = trace_norm(A * np.outer(v, u))
    lower = max(lower, float(np.sum(A * W)))
    return NormCertificate(
        value=upper, lower=lower, upper=upper, primal=f,
        dual=DualWitness(W=W, u=u, v=v, bound=lower),
        info={"iterations": sol.iterations, "sdp_gap": sol.gap, "primal_shift": shift},
    )


def band_dual_bound(A, W, alpha: float) -> float:
    """min over A' in the band of <A', W>; a lower bound on gamma_2^alpha when gamma_2*(W) <= 1."""
    P = A * W
    return float(np.sum(np.where(P > 0, P, alpha * P)))


def gamma2_alpha(A, band: ApproxBand, tol: float = 1e-8):
    """gamma_2^alpha and a witness A' in the band with gamma_2(A') <= value."""
    A = as_sign_matrix(A)
    alpha = band.alpha
    m, n = A.shape
    sol = _solve(_gamma2_program(A, alpha), tol)
    C = np.clip(A * sol.Z[:m, m:], 1.0, alpha)
    witness = A * C
    f, upper, shift = _primal_side(sol.Z, witness, tol)
    W, D1, D2 = _dual_side(sol.S, m, n)
    lower = band_dual_bound(A, W, alpha)
    cert = NormCertificate(
        value=upper, lower=lower, upper=upper, primal=f,
        dual=DualWitness(W=W, u=_unit(D2), v=_unit(D1), bound=lower),
        info={"iterations": sol.iterations, "sdp_gap": sol.gap, "primal_shift": shift},
    )
    return cert, witness


def _atom_matrix(m, n):
    xs, ys = atom_patterns(m, n)
    Phi = np.einsum("ki,kj->ijk", xs, ys).reshape(m * n, -1)
    return xs, ys, Phi


def _max_atom_pairing(W, xs, ys):
    return float(np.max(np.abs(np.einsum("ki,ij,kj->k", xs, W, ys))))


def nu(A) -> NormCertificate:
    """Exact nu by linear programming over all sign atoms."""
    A = as_matrix(A)
    m, n = A.shape
    xs, ys, Phi = _atom_matrix(m, n)
    N = Phi.shape[1]
    lp = LpProblem(c=np.ones(2 * N), A_eq=np.hstack([Phi, -Phi]), b_eq=A.reshape(-1))
    sol = solve_lp(lp)
    coeffs = sol.x[:N] - sol.x[N:]
    coeffs[np.abs(coeffs) < 1e-13] = 0.0
    dec = Decomposition(coeffs=coeffs, xs=xs, ys=ys)
    W = sol.eq_duals.reshape(m, n)
    omega = _max_atom_pairing(W, xs, ys)
    lower = float(np.sum(A * W)) / max(1.0, omega)
    upper = dec.weight()
    return NormCertificate(
        value=upper, lower=lower, upper=upper, primal=dec,
        dual=DualWitness(W=W / max(1.0, omega), bound=lower),
        info={"residual": float(np.abs(dec.matrix() - A).max()), "atoms": N},
    )


def nu_alpha(A, band: ApproxBand):
    """min nu(A') over the band; returns (certificate, witness A')."""
    A = as_sign_matrix(A)
    m, n = A.shape
    xs, ys, Phi = _atom_matrix(m, n)
    N = Phi.shape[1]
    a = A.reshape(-1)
    lo = np.where(a > 0, 1.0, -band.alpha)
    hi = np.where(a > 0, band.alpha, -1.0)
    lp = LpProblem(
        c=np.concatenate([np.ones(2 * N), np.zeros(m * n)]),
        A_eq=np.hstack([Phi, -Phi, -np.eye(m * n)]), b_eq=np.zeros(m * n),
        bounds=[(0, None)] * (2 * N) + list(zip(lo, hi)),
    )
    sol = solve_lp(lp)
    coeffs = sol.x[:N] - sol.x[N: 2 * N]
    coeffs[np.abs(coeffs) < 1e-13] = 0.0
    dec = Decomposition(coeffs=coeffs, xs=xs, ys=ys)
    witness = dec.matrix()
    W = sol.eq_duals.reshape(m, n)
    omega = _max_atom_pairing(W, xs, ys)
    # either sign of W is dual feasible once normalized; keep the better one
    if band_dual_bound(A, -W, band.alpha) > band_dual_bound(A, W, band.alpha):
        W = -W
    W = W / max(1.0, omega)
    lower = band_dual_bound(A, W, band.alpha)
    upper = dec.weight()
    cert = NormCertificate(
        value=upper, lower=lower, upper=upper, primal=dec,
        dual=DualWitness(W=W, bound=lower), info={"atoms": N},
    )
    return cert, witness


def nu_upper_bound(g2: float, tight: bool = False) -> float:
    """Upper bound on nu from gamma_2: factor 2, or K_G's published upper end."""
    if g2 < 0:
        raise ValidationError("gamma_2 value must be nonnegative")
    return (GROTHENDIECK.K_hi if tight else 2.0) * g2


def rank_lower_bound(A, band: ApproxBand, tol: float = 1e-8, cert: NormCertificate | None = None) -> float:
    if cert is None:
        cert, _ = gamma2_alpha(A, band, tol)
    return cert.lower**2 / band.alpha**2
