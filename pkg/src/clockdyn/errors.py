"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input failed a structural or numerical precondition."""


class ClockDomainError(ValueError):
    """A clock law was evaluated outside its analyticity/support domain."""


class RegimeError(RuntimeError):
    """A numerical estimate left its validity regime (not a usage bug)."""
