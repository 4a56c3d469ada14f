"""Exception hierarchy shared by every module."""


class RaagmmError(Exception):
    """Base class for all errors raised by raagmm."""


class InputError(RaagmmError, ValueError):
    """Malformed input: unknown vertex, bad file, bad literal."""


class PreconditionError(RaagmmError, ValueError):
    """An operation was called outside its domain."""


class ValidityError(RaagmmError, ValueError):
    """An object violates a structural invariant (e.g. not a union of components)."""


class JoinUndefined(RaagmmError):
    """A collection of vertex types is not pairwise compatible."""


class BudgetExceeded(RaagmmError):
    """An enumeration hit its configured size budget."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial or {}
