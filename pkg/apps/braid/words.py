"""
Braid words in the Artin generators sigma_i^{+1/-1}.
"""
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from .exceptions import StrandCountError

Letter = Tuple[int, int]


@dataclass(frozen=True)
class BraidWord:
    """Word on k strands; letter (i, s) is sigma_i^s with 1 <= i <= k - 1 and s = +1 or -1."""

    k: int
    letters: Tuple[Letter, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, 'letters', tuple((int(i), int(s)) for i, s in self.letters))
        if self.k < 1:
            raise StrandCountError(f'A braid needs at least one strand, got k = {self.k}')
        for i, s in self.letters:
            if not 1 <= i <= self.k - 1:
                raise StrandCountError(f'Generator sigma_{i} does not exist on {self.k} strands')
            if s not in (1, -1):
                raise ValueError(f'Exponent must be +1 or -1, got {s}')

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        if not self.letters:
            return 'e'
        return ' '.join(f's{i}' if s == 1 else f's{i}^-1' for i, s in self.letters)


def identity(k: int) -> BraidWord:
    return BraidWord(k)


def _check_same_k(a: BraidWord, b: BraidWord) -> None:
    if a.k != b.k:
        raise StrandCountError(f'Braids on {a.k} and {b.k} strands cannot be combined')


def compose(a: BraidWord, b: BraidWord) -> BraidWord:
    """a followed by b."""
    _check_same_k(a, b)
    return BraidWord(a.k, a.letters + b.letters)


def invert(a: BraidWord) -> BraidWord:
    return BraidWord(a.k, tuple((i, -s) for i, s in reversed(a.letters)))


def free_reduce(a: BraidWord) -> BraidWord:
    """Cancel adjacent sigma_i sigma_i^-1 pairs until none remain."""
    stack: List[Letter] = []
    for i, s in a.letters:
        if stack and stack[-1] == (i, -s):
            stack.pop()
        else:
            stack.append((i, s))
    return BraidWord(a.k, tuple(stack))


def exponent_sum(a: BraidWord) -> int:
    return sum(s for _, s in a.letters)


def parse_word(k: int, data: Iterable[int]) -> BraidWord:
    """
    Word from its JSON form: a list of nonzero integers, sign times index.

    [1, -2, 1] is sigma_1 sigma_2^-1 sigma_1.
    """
    letters = []
    for value in data:
        if isinstance(value, bool) or not isinstance(value, int) or value == 0:
            raise ValueError(f'Letters are nonzero integers, got {value!r}')
        letters.append((abs(value), 1 if value > 0 else -1))
    return BraidWord(k, tuple(letters))


def word_to_json(a: BraidWord) -> List[int]:
    return [s * i for i, s in a.letters]


def power(a: BraidWord, n: int) -> BraidWord:
    if n < 0:
        return power(invert(a), -n)
    return BraidWord(a.k, a.letters * n)


def positive_word(k: int, indices: Sequence[int]) -> BraidWord:
    return BraidWord(k, tuple((i, 1) for i in indices))
