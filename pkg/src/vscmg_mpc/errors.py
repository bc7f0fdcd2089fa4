"""Exception types shared across the package."""


class VscmgError(Exception):
    """Base class for all package-specific errors."""


class DomainError(VscmgError):
    """An input lies outside the mathematical domain of an operation."""


class DegenerateAxis(VscmgError):
    """A cluster axis column has collapsed and cannot be renormalized."""


class UncontrollableError(VscmgError):
    """The (A, B) pair is not controllable at the numeric rank tolerance."""


class PlacementFailure(VscmgError):
    """Pole assignment stopped with residual above tolerance."""


class SingularBasis(VscmgError):
    """An eigenvector basis is numerically singular."""


class ParseError(VscmgError):
    """A scenario file could not be parsed."""


class ValidationError(VscmgError):
    """A scenario or parameter set violates a documented invariant."""


class DivergenceError(VscmgError):
    """The propagated state became non-finite."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t
