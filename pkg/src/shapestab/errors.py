"""Exception types shared across the library."""


class ShapeStabError(Exception):
    """Base class for all library-specific failures."""


class ConvergenceError(ShapeStabError):
    """An iterative search failed to converge; carries the last bracket."""

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket


class InvalidDomainError(ShapeStabError):
    """The perturbation does not describe a star-shaped domain."""


class InvariantViolationError(ShapeStabError):
    """A structural identity that must hold to round-off was violated."""


class DegenerateCoefficientError(ShapeStabError):
    """A per-mode coefficient is independent of the combination parameter."""


class InconclusiveTailError(ShapeStabError):
    """The finite scan cannot certify the behaviour of the remaining modes."""


class IllConditionedError(ShapeStabError):
    """A least-squares fit left a residual too large to trust the result."""


class BracketFailureError(ConvergenceError):
    """An eigenvalue search hit the edge of its bracket."""


class SpuriousModeError(ShapeStabError):
    """The reconstructed eigenfunction changes sign in the interior."""
