"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain where the operation is defined."""


class InvalidPrimeSetError(ValueError):
    """A prime set is malformed or shares a prime with the coefficients."""


class InvalidTripleError(ValueError):
    """A coefficient triple violates the operation's preconditions."""


class ContractViolation(ValueError):
    """Inputs do not satisfy the equation they are claimed to solve."""


class GuardLimitError(RuntimeError):
    """A combinatorial size guard was exceeded; the work was refused."""

    def __init__(self, message: str, limit: int, size: int):
        super().__init__(message)
        self.limit = limit
        self.size = size
