"""Exception types shared across the package."""


class DomainError(ValueError):
    """A point lies outside the domain of a weight or kernel."""


class ValidationError(ValueError):
    """Malformed or inadmissible input (bad weight spec, bad option)."""


class AccuracyError(ArithmeticError):
    """A numerical routine could not certify the requested tolerance.

    ``estimate`` carries the best value obtained before giving up and
    ``context`` any diagnostic numbers worth reporting.
    """

    def __init__(self, message, estimate=None, **context):
        super().__init__(message)
        self.estimate = estimate
        self.context = context


class BoundaryZeroError(AccuracyError):
    """A zero sits on (or too close to) every contour that was tried."""
