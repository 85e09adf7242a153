"""Shared exception types."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(RuntimeError):
    """An iteration failed to converge within its cap."""

    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = list(history) if history is not None else []


class MLOverflowError(OverflowError):
    """Mittag-Leffler series overflowed double precision."""


class GridMismatchError(ValueError):
    """Two grid functions do not live on the same grid."""


class CertificateRejected(ValueError):
    """A caller-supplied certificate constant failed machine verification."""

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = list(violations) if violations is not None else []
