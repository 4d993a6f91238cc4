"""Exception types shared across the package."""


class DomainError(ValueError):
    """Raised when an argument is outside the mathematical domain.

    Examples: empty vectors, non-positive or non-finite entries, NaN
    exponents, malformed parameter strings.
    """


class CapacityError(RuntimeError):
    """Raised when a computation would exceed the enumeration budget.

    Callers should switch to a closed-form path or to the Monte Carlo
    estimator instead of retrying.
    """
