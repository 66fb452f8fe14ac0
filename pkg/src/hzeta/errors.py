"""Exception types shared across the package."""


class HZetaError(Exception):
    """Base class for all errors raised by hzeta."""


class DomainError(HZetaError, ValueError):
    """An argument lies outside the domain of the operation."""


class InconsistencyError(HZetaError, ArithmeticError):
    """Input data cannot come from an actual scheme (e.g. fractional orbit counts)."""


class InternalInconsistency(HZetaError, AssertionError):
    """A mathematical invariant failed; this signals a bug, not bad input."""


class PoleError(HZetaError, ZeroDivisionError):
    """An Euler factor was evaluated at a zero of its denominator."""


class ResourceLimitError(HZetaError, RuntimeError):
    """An enumeration budget or iteration cap was exceeded.

    ``partial`` carries whatever incomplete result was computed before the limit hit.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
