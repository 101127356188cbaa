"""Exception hierarchy shared by every module of the package."""


class VasintError(Exception):
    """Base class for all errors raised by :mod:`vasint`."""


class NonPositiveArgument(VasintError, ValueError):
    pass


class InvalidOrder(VasintError, ValueError):
    pass


class InvalidParameters(VasintError, ValueError):
    pass


class ZeroDenominator(VasintError, ZeroDivisionError):
    pass


class NotConvergent(VasintError):
    pass


class MaxTermsExceeded(VasintError):
    """The requested tolerance could not be reached within the term budget.

    ``estimate`` and ``error`` carry the best value seen so far, if any.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


class ConditionViolated(VasintError):
    """A convergence or admissibility condition failed; carries the verdict."""

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class DimensionTooLarge(VasintError, ValueError):
    pass


class ReconstructionMismatch(VasintError):
    pass


class ParityViolation(VasintError):
    pass


class LogTermSurvives(VasintError):
    pass
