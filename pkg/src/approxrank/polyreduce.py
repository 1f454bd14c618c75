"""Band sharpening with the odd cubic p(x) = a1 x - a3 x^3.

With a3 = 1/(2 + 6 eps + 4 eps^2) and a1 = 1 + a3, p fixes 1 and 1 + 2 eps
and maps [1, 1 + 2 eps] into [1, 1 + eps]. Applied entrywise it turns the
rank r of a matrix into at most r + r^3.
"""
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveEpsilon, ValidationError


@dataclass(frozen=True)
class PolySpec:
    epsilon: float
    a1: float
    a3: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.a1 * x - self.a3 * (x * x * x)


def make_poly(epsilon: float) -> PolySpec:
    if not epsilon > 0:
        raise NonPositiveEpsilon(f"epsilon must be positive, got {epsilon}")
    a3 = 1.0 / (2.0 + 6.0 * epsilon + 4.0 * epsilon**2)
    return PolySpec(epsilon=float(epsilon), a1=1.0 + a3, a3=a3)


def stationary_point(poly: PolySpec) -> float:
    return math.sqrt((1 + poly.a3) / (3 * poly.a3))


def poly_max_on_band(poly: PolySpec) -> float:
    """Maximum of p over [1, 1 + 2 eps]."""
    x = stationary_point(poly)
    if 1.0 <= x <= 1.0 + 2.0 * poly.epsilon:
        return 2.0 / (3.0 * math.sqrt(3.0)) * (1 + poly.a3) ** 1.5 / math.sqrt(poly.a3)
    return float(max(poly(1.0), poly(1.0 + 2.0 * poly.epsilon)))


def apply_poly(M, poly: PolySpec) -> np.ndarray:
    return poly(M)


def rank_bound_after_poly(r: int) -> int:
    """r + r^3: one term of rank r, one of rank at most r^3."""
    if r < 0:
        raise ValidationError("rank must be nonnegative")
    return r + r**3


def rank_bound_loose(r: int) -> int:
    """The looser 2 r^3 form."""
    return 2 * r**3


@dataclass(frozen=True)
class SharpenResult:
    B: np.ndarray
    epsilons: tuple
    band_in: tuple
    band_out: tuple

    @property
    def iterations(self) -> int:
        return len(self.epsilons)


def sharpen(M, A, alpha: float, slack: float = 1e-12) -> SharpenResult:
    """Apply the cubic until ``A o B`` lies in [1, alpha].

    The first pass uses eps = alpha - 1 when the input fits in [1, 2 alpha - 1];
    otherwise, and on every later pass, eps = (upper - 1) / 2 so the current
    band exactly fills [1, 1 + 2 eps].
    """
    A = np.asarray(A, dtype=float)
    B = np.asarray(M, dtype=float)
    P = A * B
    band_in = (float(P.min()), float(P.max()))
    eps_used = []
    for _ in range(64):
        upper = float((A * B).max())
        if eps_used and upper <= alpha + slack:
            break
        if not eps_used and upper <= 2 * alpha - 1 + slack:
            eps = alpha - 1.0
        else:
            eps = (upper - 1.0) / 2.0
        poly = make_poly(eps)
        B = apply_poly(B, poly)
        eps_used.append(eps)
    P = A * B
    return SharpenResult(B=B, epsilons=tuple(eps_used), band_in=band_in,
                         band_out=(float(P.min()), float(P.max())))
