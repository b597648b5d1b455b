"""Exception types shared across the package."""


class InvalidStateError(ValueError):
    """A quantum or ontic state violates its invariants (norm, trace, positivity)."""


class InvalidArgumentError(ValueError):
    """An argument is outside its documented domain."""


class UndefinedConditionalStateError(ValueError):
    """A post-measurement state was requested for a zero-probability outcome."""


class ContractMismatchError(TypeError):
    """An operation requires the single-world sequential model contract."""


class NumericalFailureError(RuntimeError):
    """A numerical routine failed to reach its certified accuracy (implementation bug)."""
