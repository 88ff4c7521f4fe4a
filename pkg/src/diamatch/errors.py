"""Exception types raised across the package."""


class DiamatchError(Exception):
    """Base class for all package errors."""


class ValidationError(DiamatchError, ValueError):
    """Input does not satisfy an operation's preconditions."""


class PreconditionError(ValidationError):
    """A named precondition of a geometric check is violated.

    ``condition`` carries a short machine-readable name so callers (and the
    lemma campaigns) can tell which requirement failed.
    """

    def __init__(self, condition, message=None):
        self.condition = condition
        super().__init__(message or condition)


class DegenerateGeometryError(DiamatchError, ValueError):
    """Coincident points, zero-length directions or collinear frames."""


class IdenticalCirclesError(DegenerateGeometryError):
    """Two circles coincide, so their intersection is infinite."""


class SizeGuardError(ValidationError):
    """Instance is too large for an exhaustive routine."""


class CaseResolutionError(DiamatchError):
    """No branch of the shrinking construction applied within tolerance."""

    def __init__(self, message, diagnostics=None):
        self.diagnostics = diagnostics or {}
        super().__init__(message)
