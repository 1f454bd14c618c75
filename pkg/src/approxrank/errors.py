"""Exception types raised across the package."""


class ApproxRankError(Exception):
    """Base class. ``stage`` and ``diagnostics`` are filled in by the pipeline."""

    stage: str | None = None
    diagnostics: dict | None = None


class ValidationError(ApproxRankError, ValueError):
    pass


class ShapeMismatch(ValidationError):
    pass


class NonPositiveEpsilon(ValidationError):
    pass


class TooLarge(ValidationError):
    pass


class NumericalFailure(ApproxRankError, ArithmeticError):
    pass


class Infeasible(NumericalFailure):
    pass


class Unbounded(NumericalFailure):
    pass


class NotPsd(NumericalFailure):
    pass


class NotExact(ApproxRankError):
    pass


class SignViolation(ApproxRankError):
    def __init__(self, message, entries=()):
        super().__init__(message)
        self.entries = list(entries)


class TrialsExhausted(ApproxRankError):
    def __init__(self, message, best=None, best_error=float("inf"), trials=0):
        super().__init__(message)
        self.best = best
        self.best_error = best_error
        self.trials = trials
