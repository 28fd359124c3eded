"""Exception hierarchy shared by every module."""


class TSeqError(Exception):
    """Base class for all library errors."""


class ContextMismatch(TSeqError):
    """Operands live in different ambient groups."""


class NotPrime(TSeqError, ValueError):
    pass


class CapExceeded(TSeqError):
    """A subgroup closure grew past the configured cap."""


class BudgetExceeded(TSeqError):
    """An enumeration would evaluate more combinations than allowed."""


class PEqualsTwo(TSeqError, ValueError):
    """Canonical forms only exist for odd primes."""


class TruncationTooShort(TSeqError, ValueError):
    """A truncated character cannot determine the requested value."""


class GapTooSmall(TSeqError, ValueError):
    pass


class InvalidSpec(TSeqError, ValueError):
    pass


class NotIncreasing(InvalidSpec):
    pass


class RepeatedTerms(InvalidSpec):
    """A combined sequence repeats one of its terms."""

    def __init__(self, first: int, second: int, element=None):
        super().__init__(f"terms {first} and {second} coincide")
        self.first = first
        self.second = second
        self.element = element
