"""
Permutation braids (simple elements of B_k) as 0-indexed one-line tuples.

perm[p] is the final position of the strand that starts at position p.
Products are read left to right: compose_perm(a, b) runs a first, then b.
"""
from functools import lru_cache
from itertools import permutations
from typing import FrozenSet, Iterator, List, Tuple

Perm = Tuple[int, ...]


def identity_perm(k: int) -> Perm:
    return tuple(range(k))


def delta(k: int) -> Perm:
    """The half-twist: every pair of strands crosses once."""
    return tuple(range(k - 1, -1, -1))


def generator_perm(k: int, j: int) -> Perm:
    """Permutation of sigma_j (1-based), exchanging positions j - 1 and j."""
    perm = list(range(k))
    perm[j - 1], perm[j] = perm[j], perm[j - 1]
    return tuple(perm)


def compose_perm(a: Perm, b: Perm) -> Perm:
    return tuple(b[a[p]] for p in range(len(a)))


def inverse(a: Perm) -> Perm:
    result = [0] * len(a)
    for p, q in enumerate(a):
        result[q] = p
    return tuple(result)


def inversions(a: Perm) -> FrozenSet[Tuple[int, int]]:
    """Pairs of starting positions p < q whose strands cross."""
    n = len(a)
    return frozenset((p, q) for p in range(n) for q in range(p + 1, n) if a[p] > a[q])


def length(a: Perm) -> int:
    return len(inversions(a))


def tau(a: Perm) -> Perm:
    """Conjugation by the half-twist, sigma_i -> sigma_{k-i}."""
    k = len(a)
    return tuple(k - 1 - a[k - 1 - p] for p in range(k))


def left_divides(a: Perm, b: Perm) -> bool:
    """b = a c with lengths adding, c simple."""
    return length(a) + length(compose_perm(inverse(a), b)) == length(b)


def right_divides(a: Perm, b: Perm) -> bool:
    """b = c a with lengths adding, c simple."""
    return length(compose_perm(b, inverse(a))) + length(a) == length(b)


@lru_cache(maxsize=None)
def starting_set(b: Perm) -> FrozenSet[int]:
    """S(b) = {j : sigma_j left-divides b}, from the divisibility definition."""
    k = len(b)
    return frozenset(j for j in range(1, k) if left_divides(generator_perm(k, j), b))


@lru_cache(maxsize=None)
def finishing_set(a: Perm) -> FrozenSet[int]:
    """F(a) = {j : a = a' sigma_j with a' simple}, from the divisibility definition."""
    k = len(a)
    return frozenset(j for j in range(1, k) if right_divides(generator_perm(k, j), a))


def starting_descents(b: Perm) -> FrozenSet[int]:
    """Shortcut for S(b): the strands at positions j - 1, j have crossed."""
    return frozenset(j for j in range(1, len(b)) if b[j - 1] > b[j])


def finishing_descents(a: Perm) -> FrozenSet[int]:
    """Shortcut for F(a): the strands ending at positions j - 1, j have crossed."""
    back = inverse(a)
    return frozenset(j for j in range(1, len(a)) if back[j - 1] > back[j])


def complement_of_generator(k: int, i: int) -> Perm:
    """Simple Y with Y sigma_i = Delta, so that sigma_i^-1 = Delta^-1 Y."""
    return compose_perm(delta(k), generator_perm(k, i))


def reduced_word(b: Perm) -> List[int]:
    """Positive word of minimal length for a simple braid, lowest generator first."""
    letters = []
    while True:
        starts = starting_descents(b)
        if not starts:
            return letters
        j = min(starts)
        letters.append(j)
        b = compose_perm(generator_perm(len(b), j), b)


def all_perms(k: int) -> Iterator[Perm]:
    return permutations(range(k))


def to_one_line(a: Perm) -> List[int]:
    """1-based one-line notation for JSON."""
    return [p + 1 for p in a]


def from_one_line(values) -> Perm:
    a = tuple(int(v) - 1 for v in values)
    if sorted(a) != list(range(len(a))):
        raise ValueError(f'Not a permutation: {list(values)}')
    return a
