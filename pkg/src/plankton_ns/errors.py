"""Exception hierarchy shared by all modules."""


class PlanktonError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PlanktonError, ValueError):
    """An argument lies outside the domain where a formula is defined."""


class EscapeError(PlanktonError, ArithmeticError):
    """Iteration produced a non-finite state."""

    def __init__(self, message, coordinate=None, step=None):
        super().__init__(message)
        self.coordinate = coordinate
        self.step = step


class ConsistencyError(PlanktonError, ValueError):
    """A supplied point does not satisfy the fixed-point relation it claims to."""


class NotFoundError(PlanktonError, LookupError):
    """A requested root or bifurcation point does not exist for these parameters."""


class RealEigenvalueError(PlanktonError, ValueError):
    """Eigenvalues are real where a complex pair was required."""


class SingularTransformError(PlanktonError, ZeroDivisionError):
    """The normal-form change of basis is singular."""


class InvariantViolation(PlanktonError, AssertionError):
    """A proven property failed numerically. Never silently corrected."""


class RootCountError(PlanktonError, ArithmeticError):
    """Root isolation did not find the number of roots a case requires."""

    def __init__(self, message, discriminant=None, roots=()):
        super().__init__(message)
        self.discriminant = discriminant
        self.roots = tuple(roots)


class UnderflowError(PlanktonError, ArithmeticError):
    """Tangent vector collapsed to zero during Lyapunov exponent estimation."""


class NotApplicableError(PlanktonError, ValueError):
    """The requested analysis does not apply to these parameters."""
