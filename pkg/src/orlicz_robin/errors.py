"""Exception types shared across the package."""


class OrliczError(Exception):
    """Base class for package errors."""


class DivergentIntegralError(OrliczError):
    """An endpoint integral required to converge was found divergent."""


class QuadratureError(OrliczError):
    """Quadrature failed to converge; carries the offending abscissa."""

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class UnboundedNormError(OrliczError):
    """The Luxemburg modular stayed above 1 for every bracket value."""


class BracketError(OrliczError):
    """A bisection bracket could not be established."""


class InternalConsistencyError(OrliczError):
    """A quantity that is provably monotone came out non-monotone.

    Signals a quadrature or tabulation bug, not bad input.
    """


class ParameterError(OrliczError, ValueError):
    """Input parameters violate a documented precondition."""
