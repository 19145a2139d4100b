"""Exception hierarchy shared by all solvers.

Two branches matter for callers: ``ValidationError`` (bad inputs or
preconditions, CLI exit code 1) and ``NoSolutionError`` (a well-posed
request with no answer, CLI exit code 2).
"""


class ShgSolitonsError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(ShgSolitonsError):
    """Invalid parameter, option, or precondition."""


class BracketError(ValidationError):
    """Root bracket endpoints do not enclose a sign change."""


class RegionError(ValidationError):
    """Wavenumber lies in the wrong spectral region for the operation."""


class DomainTooShortError(ValidationError):
    """Profile domain ends before the fields have decayed."""


class NoSolutionError(ShgSolitonsError):
    """No solution exists (or none was found) for a well-posed request."""


class NoConvergenceError(NoSolutionError):
    """Iteration budget exhausted before reaching the tolerance."""


class NoRootError(NoSolutionError):
    """No sign change found in the search interval."""


class UnphysicalError(NoSolutionError):
    """Closed-form solution exists only with a negative squared amplitude."""


class InvalidWavenumberError(NoSolutionError):
    """Closed-form wavenumber is non-positive or its denominator vanishes."""


class DegenerateEquationError(NoSolutionError):
    """Both leading coefficients of the amplitude equation vanish."""


class NoEmbeddedSolitonError(NoSolutionError):
    """Tail-amplitude scan found no embedded soliton in the range."""


class BlowUpError(NoSolutionError):
    """Trajectory exceeded the blow-up ceiling.

    Carries the time and state at the last accepted step so shooting
    drivers can use the escape direction.
    """

    def __init__(self, message, t=None, y=None):
        super().__init__(message)
        self.t = t
        self.y = y


class StepUnderflowError(NoSolutionError):
    """Adaptive step size shrank below the resolvable limit."""
