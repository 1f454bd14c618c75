"""Factorization norms of sign matrices and a certified low-rank band approximation."""
from .errors import (
    ApproxRankError, Infeasible, NonPositiveEpsilon, NotExact, NotPsd, NumericalFailure,
    ShapeMismatch, SignViolation, TooLarge, TrialsExhausted, Unbounded, ValidationError,
)
from .linalg import numerical_rank, svd, trace_norm
from .norms import ApproxBand, gamma2, gamma2_alpha, nu, nu_alpha, nu_upper_bound, rank_lower_bound
from .oracle import is_rank_alpha_one, verify_band
from .pipeline import PipelineConfig, approximate_rank_pipeline, theorem1_bounds

__version__ = "0.1.0"

__all__ = [
    "ApproxBand", "ApproxRankError", "Infeasible", "NonPositiveEpsilon", "NotExact", "NotPsd",
    "NumericalFailure", "PipelineConfig", "ShapeMismatch", "SignViolation", "TooLarge",
    "TrialsExhausted", "Unbounded", "ValidationError", "approximate_rank_pipeline", "gamma2",
    "gamma2_alpha", "is_rank_alpha_one", "numerical_rank", "nu", "nu_alpha", "nu_upper_bound",
    "rank_lower_bound", "svd", "theorem1_bounds", "trace_norm", "verify_band",
]
