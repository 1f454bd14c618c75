"""Brute-force ground truth for tiny sign matrices."""
from dataclasses import dataclass, field

import numpy as np

from .errors import ShapeMismatch, TooLarge
from .linalg import as_sign_matrix

MAX_ATOM_BITS = 15


def atom_count(m: int, n: int) -> int:
    return 2 ** (m + n - 1)


def atom_patterns(m: int, n: int):
    """All sign vector pairs (x, y) with x[0] = +1, as arrays of shape (N, m), (N, n)."""
    if m + n - 1 > MAX_ATOM_BITS:
        raise TooLarge(f"{atom_count(m, n)} atoms exceeds the 2^{MAX_ATOM_BITS} limit")
    bits = m + n - 1
    codes = np.arange(2**bits, dtype=np.int64)[:, None]
    pm = 1.0 - 2.0 * ((codes >> np.arange(bits)) & 1)
    xs = np.hstack([np.ones((pm.shape[0], 1)), pm[:, : m - 1]])
    ys = pm[:, m - 1:]
    return xs, ys


def enumerate_atoms(m: int, n: int, up_to_sign: bool = False) -> list:
    """All distinct rank-one sign matrices, or one per +/- pair with ``up_to_sign``."""
    xs, ys = atom_patterns(m, n)
    if up_to_sign:
        keep = ys[:, 0] > 0
        xs, ys = xs[keep], ys[keep]
    return [np.outer(x, y) for x, y in zip(xs, ys)]


def is_rank_alpha_one(A, alpha: float) -> bool:
    """True iff some rank-one matrix lies in the band ``J <= A o B <= alpha J``.

    A rank-one B in the band has sign pattern exactly A, and then A itself is a
    rank-one witness, so the question reduces to whether A is a sign atom.
    """
    A = as_sign_matrix(A)
    m, n = A.shape
    if m > 4 or n > 4:
        raise TooLarge("exhaustive rank-one check limited to 4 x 4")
    xs, ys = atom_patterns(m, n)
    for x, y in zip(xs, ys):
        P = np.outer(x, y)
        if np.array_equal(P, A) or np.array_equal(-P, A):
            return True
    return False


@dataclass
class BandReport:
    passed: bool
    band_min: float
    band_max: float
    alpha: float
    tol: float
    violations: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed, "band_min": self.band_min, "band_max": self.band_max,
            "alpha": self.alpha, "tol": self.tol,
            "violations": [{"row": i, "col": j, "value": v} for i, j, v in self.violations],
        }


def verify_band(A, B, alpha: float, tol: float = 1e-8) -> BandReport:
    A = as_sign_matrix(A)
    B = np.asarray(B, dtype=float)
    if A.shape != B.shape:
        raise ShapeMismatch(f"shapes differ: {A.shape} vs {B.shape}")
    P = A * B
    bad = (P < 1 - tol) | (P > alpha + tol) | ~np.isfinite(P)
    viol = [(int(i), int(j), float(P[i, j])) for i, j in zip(*np.nonzero(bad))]
    return BandReport(
        passed=not viol, band_min=float(P.min()), band_max=float(P.max()),
        alpha=float(alpha), tol=float(tol), violations=viol,
    )
