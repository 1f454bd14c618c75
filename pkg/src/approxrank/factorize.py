"""Explicit factorizations ``X.T @ Y`` built from Gram matrices and from
sign-atom decompositions."""
from dataclasses import dataclass

import numpy as np

from .errors import NotExact, NotPsd, ValidationError


@dataclass(frozen=True)
class Factorization:
    X: np.ndarray  # k x m
    Y: np.ndarray  # k x n
    col_bound: float

    @property
    def k(self) -> int:
        return self.X.shape[0]

    def product(self) -> np.ndarray:
        return self.X.T @ self.Y

    def column_norms(self):
        return np.linalg.norm(self.X, axis=0), np.linalg.norm(self.Y, axis=0)

    def norm_product(self) -> float:
        """c(X) c(Y): the largest column norm of X times that of Y."""
        cx, cy = self.column_norms()
        return float(cx.max() * cy.max())


def make_factorization(X, Y) -> Factorization:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    Y = np.atleast_2d(np.asarray(Y, dtype=float))
    if X.shape[0] != Y.shape[0]:
        raise ValidationError("X and Y need the same inner dimension")
    cb = max(np.linalg.norm(X, axis=0).max(), np.linalg.norm(Y, axis=0).max())
    return Factorization(X=X, Y=Y, col_bound=float(cb))


@dataclass(frozen=True)
class LayeredFactorization:
    """Layers ``s_i * beta_i * x_i y_i^T``; row i of X and Y has magnitude sqrt(beta_i)."""

    beta: np.ndarray
    xs: np.ndarray  # k x m sign patterns
    ys: np.ndarray  # k x n sign patterns
    signs: np.ndarray

    def target(self) -> np.ndarray:
        return np.einsum("k,ki,kj->ij", self.signs * self.beta, self.xs, self.ys)

    def to_factorization(self) -> Factorization:
        r = np.sqrt(self.beta)[:, None]
        return make_factorization(r * self.signs[:, None] * self.xs, r * self.ys)


def factor_from_gram(Z, m: int, n: int, tol: float = 1e-8) -> Factorization:
    """Square root of a PSD Gram matrix, split into row and column factors."""
    Z = np.asarray(Z, dtype=float)
    if Z.shape != (m + n, m + n):
        raise ValidationError(f"Gram matrix must be {(m + n, m + n)}, got {Z.shape}")
    Z = (Z + Z.T) / 2
    w, Q = np.linalg.eigh(Z)
    if w[0] < -10 * tol * max(1.0, np.abs(w).max()):
        raise NotPsd(f"Gram matrix has eigenvalue {w[0]:.3e}")
    w = np.clip(w, 0.0, None)
    R = np.sqrt(w)[:, None] * Q.T  # R.T @ R = Z
    return make_factorization(R[:, :m], R[:, m:])


def layered_from_nu(cert) -> LayeredFactorization:
    dec = getattr(cert, "primal", None)
    if dec is None or not hasattr(dec, "coeffs"):
        raise NotExact("certificate carries no sign-atom decomposition")
    c = np.asarray(dec.coeffs, dtype=float)
    keep = c != 0
    return LayeredFactorization(
        beta=np.abs(c[keep]), xs=dec.xs[keep], ys=dec.ys[keep], signs=np.sign(c[keep]),
    )
