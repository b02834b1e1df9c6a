"""Exception types shared across the package."""


class ResourceLimitError(RuntimeError):
    """A configured budget (size cap, Groebner step count, wall time) was exceeded."""


class NotZeroDimensionalError(ValueError):
    """The ideal has an infinite-dimensional quotient."""
