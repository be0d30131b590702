"""Exception types shared across the codec stack."""


class SgcError(Exception):
    """Base class for all sgcodec errors."""


class CapacityError(SgcError):
    """A coding block exceeds the desk-scale size cap."""


class BudgetExceededError(SgcError):
    """An exact enumeration blew through its node budget."""


class MalformedStreamError(SgcError):
    """A container failed to parse; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (byte offset {offset})")
        self.offset = offset


class ConfigError(SgcError):
    """Bad user-facing configuration (CLI flags, graphon specs, trend configs)."""
