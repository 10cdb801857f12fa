"""Exception hierarchy.

Every failure raised by the library derives from :class:`PshError`.
Domain failures (bad spectra, mismatched metrics, degenerate input) derive
from :class:`DomainError`; the CLI maps those to exit status 2.
"""


class PshError(Exception):
    """Base class for all errors raised by :mod:`psh`."""


class DomainError(PshError, ValueError):
    """Input is well-formed but outside the mathematical domain of an operation."""


class DimensionMismatch(DomainError):
    pass


class NotDiagonalizable(DomainError):
    def __init__(self, message, condition_number=None):
        super().__init__(message)
        self.condition_number = condition_number


class NonConvergence(PshError, ArithmeticError):
    pass


class DegenerateSpectrum(DomainError):
    pass


class NotHermitian(DomainError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class NotPositiveDefinite(DomainError):
    def __init__(self, message, smallest_eigenvalue=None):
        super().__init__(message)
        self.smallest_eigenvalue = smallest_eigenvalue


class ComplexSpectrum(DomainError):
    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class MetricMismatch(DomainError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ZeroState(DomainError):
    pass


class CoincidentStates(DomainError):
    pass


class DependentStates(DomainError):
    pass


class NeverReaches(DomainError):
    """The target ray is not met by the orbit within the allowed time."""

    def __init__(self, message, closest_distance=None):
        super().__init__(message)
        self.closest_distance = closest_distance
