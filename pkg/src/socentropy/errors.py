"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`SocEntropyError`, so callers (the CLI in particular) can separate
bad input from fit failures without catching unrelated bugs.
"""


class SocEntropyError(Exception):
    """Base class for all library errors."""


class InvalidInputError(SocEntropyError, ValueError):
    """Input data or arguments violate a documented precondition."""


class DomainError(SocEntropyError, ValueError):
    """A function was evaluated outside its mathematical domain."""


class DivergentOccupationError(DomainError):
    """``beta*phi + alpha <= 0``: the Bose-Einstein occupation diverges."""


class NoSolutionError(DomainError):
    """The stationarity condition has no root for the requested level."""


class ExclusionViolationError(InvalidInputError):
    """More entities than states under Fermi-Dirac exclusion."""


class TooLargeError(InvalidInputError):
    """Problem size exceeds the exact-counting or enumeration cap."""


class NoSymmetricEquivalentError(DomainError):
    """Gini above 1/3: no symmetric (uniform) distribution reproduces it."""


class InsufficientDataError(SocEntropyError):
    """Too few usable bins for the requested estimate."""


class SingularRegressionError(SocEntropyError):
    """Regressor has zero variance."""


class InvalidPeakError(SocEntropyError):
    """Peak abscissa is not strictly positive."""


class FitError(SocEntropyError):
    """A pipeline stage failed; ``stage`` names it."""

    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"{stage}: {cause}")
