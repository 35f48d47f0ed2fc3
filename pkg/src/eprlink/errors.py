"""Exception types shared across the package.

The split mirrors the CLI exit-code contract: malformed inputs are
``ValidationError`` (exit 2), requests outside the model's domain are
``DomainError`` (exit 3), and solver failures are ``NumericError`` (exit 3).
"""


class ValidationError(ValueError):
    """An input value is malformed (bad shape, negative probability, sum != 1, ...)."""


class DomainError(ValueError):
    """An input is well-formed but outside the model's domain of validity."""


class NumericError(RuntimeError):
    """An iterative numeric procedure failed to converge."""
