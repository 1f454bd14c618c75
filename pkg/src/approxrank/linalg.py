"""Dense matrix kernels: one-sided Jacobi SVD and the norms built on it.

Matrices are plain 2-D float ``numpy`` arrays. Sign matrices are float arrays
whose entries are exactly -1 or +1; :func:`as_sign_matrix` validates them.
"""
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NumericalFailure, ShapeMismatch, ValidationError

EPS = np.finfo(float).eps
MAX_SWEEPS = 60


@dataclass(frozen=True)
class SvdResult:
    """Thin SVD: ``M = U @ diag(s) @ V.T`` with ``s`` nonincreasing."""

    U: np.ndarray
    s: np.ndarray
    V: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.s) @ self.V.T


def as_matrix(M) -> np.ndarray:
    A = np.array(M, dtype=float)
    if A.ndim != 2 or A.shape[0] < 1 or A.shape[1] < 1:
        raise ValidationError(f"expected a nonempty 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError("matrix has non-finite entries")
    return A


def as_sign_matrix(M) -> np.ndarray:
    A = as_matrix(M)
    if not np.all(np.abs(A) == 1.0):
        raise ValidationError("sign matrix entries must be exactly -1 or +1")
    return A


def is_sign_matrix(M) -> bool:
    A = np.asarray(M, dtype=float)
    return A.ndim == 2 and A.size > 0 and bool(np.all(np.abs(A) == 1.0))


@lru_cache(maxsize=None)
def _round_robin(k: int) -> tuple:
    # tournament schedule: each round is a set of disjoint column pairs
    n = k + (k % 2)
    idx = list(range(n))
    rounds = []
    for _ in range(n - 1):
        pairs = [(idx[i], idx[n - 1 - i]) for i in range(n // 2)]
        pairs = [(min(p, q), max(p, q)) for p, q in pairs if p < k and q < k]
        if pairs:
            P = np.array([p for p, _ in pairs])
            Q = np.array([q for _, q in pairs])
            rounds.append((P, Q))
        idx = [idx[0], idx[-1]] + idx[1:-1]
    return tuple(rounds)


def _complete_orthonormal(U: np.ndarray, good: np.ndarray) -> np.ndarray:
    """Replace the columns of U not flagged ``good`` by an orthonormal completion."""
    m, k = U.shape
    basis = [U[:, j] for j in range(k) if good[j]]
    out = U.copy()
    e = 0
    for j in range(k):
        if good[j]:
            continue
        while True:
            if e >= m:
                raise NumericalFailure("cannot complete orthonormal basis")
            w = np.zeros(m)
            w[e] = 1.0
            e += 1
            for _ in range(2):
                for b in basis:
                    w -= (b @ w) * b
            nw = np.linalg.norm(w)
            if nw > 1e-6:
                w /= nw
                break
        basis.append(w)
        out[:, j] = w
    return out


def _jacobi_tall(A: np.ndarray):
    # A is m x k with m >= k; orthogonalize its columns
    m, k = A.shape
    U = A.copy()
    V = np.eye(k)
    tol = max(k, 1) * EPS
    # columns at roundoff level relative to the whole matrix count as zero
    floor = (max(k, 1) * EPS) ** 2 * float(np.einsum("ij,ij->", A, A))
    rounds = _round_robin(k)
    for _ in range(MAX_SWEEPS):
        rotated = False
        for P, Q in rounds:
            up, uq = U[:, P], U[:, Q]
            alpha = np.einsum("ij,ij->j", up, up)
            beta = np.einsum("ij,ij->j", uq, uq)
            gamma = np.einsum("ij,ij->j", up, uq)
            act = np.abs(gamma) > tol * np.sqrt(alpha * beta)
            act &= (gamma != 0.0) & (np.minimum(alpha, beta) > floor)
            if not act.any():
                continue
            rotated = True
            P, Q = P[act], Q[act]
            alpha, beta, gamma = alpha[act], beta[act], gamma[act]
            with np.errstate(over="ignore"):
                zeta = (beta - alpha) / (2.0 * gamma)
                t = np.where(zeta >= 0, 1.0, -1.0) / (np.abs(zeta) + np.sqrt(1.0 + zeta * zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            up, uq = U[:, P], U[:, Q]
            U[:, P] = c * up - s * uq
            U[:, Q] = s * up + c * uq
            vp, vq = V[:, P], V[:, Q]
            V[:, P] = c * vp - s * vq
            V[:, Q] = s * vp + c * vq
        if not rotated:
            break
    else:
        raise NumericalFailure(f"Jacobi SVD did not converge in {MAX_SWEEPS} sweeps")
    sig = np.linalg.norm(U, axis=0)
    order = np.argsort(-sig, kind="stable")
    sig, U, V = sig[order], U[:, order], V[:, order]
    good = (sig * sig > floor) & (sig > 0)
    Un = np.zeros_like(U)
    Un[:, good] = U[:, good] / sig[good]
    if not good.all():
        Un = _complete_orthonormal(Un, good)
    return Un, sig, V


def svd(M) -> SvdResult:
    """Thin SVD by one-sided Jacobi rotations on the smaller dimension."""
    A = as_matrix(M)
    m, n = A.shape
    if m >= n:
        U, s, V = _jacobi_tall(A)
    else:
        V, s, U = _jacobi_tall(A.T)
    return SvdResult(U=U, s=s, V=V)


def singular_values(M) -> np.ndarray:
    return svd(M).s


def trace_norm(M) -> float:
    return float(np.sum(singular_values(M)))


def spectral_norm(M) -> float:
    return float(singular_values(M)[0])


def frobenius(M) -> float:
    return float(np.linalg.norm(np.asarray(M, dtype=float)))


def max_abs(M) -> float:
    return float(np.max(np.abs(M)))


def default_tau(shape) -> float:
    return 1e-9 * max(shape)


def numerical_rank(M, tau: float | None = None) -> int:
    """Number of singular values strictly above ``tau * sigma_max``."""
    A = as_matrix(M)
    if tau is None:
        tau = default_tau(A.shape)
    if tau < 0:
        raise ValidationError("tau must be nonnegative")
    s = singular_values(A)
    if s[0] == 0.0:
        return 0
    return int(np.sum(s > tau * s[0]))


def entrywise_product(A, B) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape:
        raise ShapeMismatch(f"shapes differ: {A.shape} vs {B.shape}")
    return A * B


def entrywise_power(A, s: int) -> np.ndarray:
    if int(s) != s or s < 1:
        raise ValidationError("power must be a positive integer")
    A = np.asarray(A, dtype=float)
    out = A.copy()
    for _ in range(int(s) - 1):
        out = out * A
    return out


def all_ones(m: int, n: int | None = None) -> np.ndarray:
    return np.ones((m, m if n is None else n))


def hadamard(n: int) -> np.ndarray:
    """Sylvester Hadamard sign matrix; ``n`` must be a power of two."""
    if n < 1 or n & (n - 1):
        raise ValidationError("Sylvester construction needs a power of two")
    H = np.ones((1, 1))
    while H.shape[0] < n:
        H = np.block([[H, H], [H, -H]])
    return H
