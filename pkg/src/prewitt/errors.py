"""Exception hierarchy.

Every error a caller can provoke with valid-but-unlucky input derives from
:class:`DomainError`; the CLI maps those to exit status 1.
"""

from __future__ import annotations


class DomainError(Exception):
    """Base class for mathematical failures (not bugs, not usage errors)."""


class RingMismatch(DomainError, TypeError):
    pass


class ContextMismatch(DomainError, TypeError):
    pass


class UnsupportedRing(DomainError):
    pass


class NotDivisible(DomainError):
    pass


class ArityMismatch(DomainError, ValueError):
    pass


class NotInImage(DomainError):
    """A ghost sequence has no Witt preimage: division by ``p**index`` failed."""

    def __init__(self, index: int, message: str | None = None):
        self.index = index
        super().__init__(message or f"not in the image of the ghost map (index {index})")


class NotMember(DomainError):
    """Sequence is outside X(R); ``index`` is the first failing divisibility."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"sequence is not in X(R): divisibility fails at index {index}")


class TooShort(DomainError):
    pass


class LevelOutOfRange(DomainError, IndexError):
    pass


class InvalidInput(DomainError, ValueError):
    pass


class NotSquare(DomainError, ValueError):
    pass


class ParseError(ValueError):
    """Malformed text input. Treated as a usage error by the CLI."""


class InternalError(RuntimeError):
    """An invariant that the mathematics guarantees was violated."""


class InternalDivisionFailure(InternalError):
    pass
