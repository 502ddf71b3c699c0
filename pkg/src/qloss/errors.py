"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Matrix or tensor-factor dimensions are inconsistent or exceed a cap."""


class ContractViolationError(ValueError):
    """An input violates a numerical contract (e.g. a non-Hermitian matrix
    passed to the Hermitian eigensolver)."""
