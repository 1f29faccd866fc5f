from typing import Iterable, Optional

from apps.core.exceptions import BraidflowError


class ParseError(BraidflowError):
    """Malformed Hamiltonian text."""

    def __init__(self, message: str, offset: int, expected: Optional[Iterable[str]] = None):
        self.offset = offset
        self.expected = sorted(expected or [])
        detail = f'{message} at offset {offset}'
        if self.expected:
            detail += f' (expected one of: {", ".join(self.expected)})'
        super().__init__(detail)


class EvaluationError(BraidflowError):
    """Evaluation failed inside a subexpression (division by zero)."""

    def __init__(self, message: str, offset: int, subexpression: str = ''):
        self.offset = offset
        self.subexpression = subexpression
        super().__init__(f'{message} at offset {offset}: {subexpression}')


class SupportError(BraidflowError):
    """The Hamiltonian is not compactly supported inside D."""


class HoferError(BraidflowError):
    """Non-finite values met while estimating a Hofer norm."""
