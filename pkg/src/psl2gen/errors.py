class Psl2Error(Exception):
    """Base class for all errors raised by psl2gen."""


class DomainError(Psl2Error, ValueError):
    """An input lies outside the mathematical domain of an operation."""


class UsageError(Psl2Error, ValueError):
    """Operands were combined incorrectly (e.g. elements of different groups)."""


class CapacityError(Psl2Error, RuntimeError):
    """A configured enumeration or memory budget would be exceeded."""

    def __init__(self, message, budget=None):
        super().__init__(message)
        self.budget = budget


class VerificationError(Psl2Error, AssertionError):
    """A claimed property failed to verify; ``claim`` names the first failure."""

    def __init__(self, claim, detail=""):
        super().__init__(f"{claim}: {detail}" if detail else claim)
        self.claim = claim
        self.detail = detail
