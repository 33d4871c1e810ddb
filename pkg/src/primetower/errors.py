"""Exception types shared across the package."""


class PrimeTowerError(Exception):
    """Base class for all errors raised by primetower."""


class InvalidArgument(PrimeTowerError, ValueError):
    pass


class OutOfRange(PrimeTowerError, ValueError):
    """An integer (or window) falls outside the sieve or search limit."""


class ArithmeticOverflow(PrimeTowerError, OverflowError):
    pass


class MalformedCode(PrimeTowerError, ValueError):
    pass


class ResourceError(PrimeTowerError, MemoryError):
    pass


class CacheCorrupt(PrimeTowerError):
    pass


class Undecided(PrimeTowerError):
    """A bounded search ran out of room before reaching a verdict.

    ``best_k`` is the largest window size that was still ambiguous.
    """

    def __init__(self, message, best_k=None, search_limit=None):
        super().__init__(message)
        self.best_k = best_k
        self.search_limit = search_limit


class PreconditionViolation(PrimeTowerError, ValueError):
    pass
