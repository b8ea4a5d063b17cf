"""Exception types shared across the package."""


class UsageError(ValueError):
    """Inputs violate a documented precondition."""


class NumericalFailure(RuntimeError):
    """A numerical routine failed to converge or produced non-finite output."""
