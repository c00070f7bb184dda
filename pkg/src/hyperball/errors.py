"""Exception types shared across the package."""


class ContractViolation(ValueError):
    """An operation was called with arguments that break its preconditions
    (mismatched dimensions, bad sizes, unsupported primitive, ...)."""


class DomainError(ValueError):
    """The inputs are well-formed but the operation is undefined for them,
    e.g. a midpoint with all-zero weights."""
