"""
Garside left normal form Delta^inf F_1 ... F_m, which decides the word problem in B_k.
"""
import logging
from dataclasses import dataclass
from typing import List, Tuple

from .exceptions import StrandCountError
from .permutations import (
    Perm,
    complement_of_generator,
    compose_perm,
    delta,
    finishing_descents,
    from_one_line,
    generator_perm,
    identity_perm,
    reduced_word,
    starting_descents,
    tau,
    to_one_line,
)
from .words import BraidWord, identity, power

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class NormalForm:
    """Left-weighted factorisation; no factor is the identity or Delta."""

    k: int
    inf: int
    factors: Tuple[Perm, ...]

    @property
    def sup(self) -> int:
        return self.inf + len(self.factors)


def _left_weight(factors: List[Perm]) -> bool:
    """One sweep of slides over every adjacent pair. True if anything moved."""
    changed = False
    for index in range(len(factors) - 1):
        a, b = factors[index], factors[index + 1]
        movable = starting_descents(b) - finishing_descents(a)
        while movable:
            j = min(movable)
            s = generator_perm(len(a), j)
            a, b = compose_perm(a, s), compose_perm(s, b)
            movable = starting_descents(b) - finishing_descents(a)
            changed = True
        factors[index], factors[index + 1] = a, b
    return changed


def normal_form(word: BraidWord) -> NormalForm:
    """
    Left normal form of a braid word.

    Each sigma_i^-1 becomes Delta^-1 Y_i with Y_i simple; moving the Delta^-1
    to the front conjugates the factors already built by tau.
    """
    k = word.k
    inf = 0
    factors: List[Perm] = []
    for i, sign in word.letters:
        if sign > 0:
            factors.append(generator_perm(k, i))
        else:
            factors = [tau(f) for f in factors]
            inf -= 1
            factors.append(complement_of_generator(k, i))

    top, bottom = delta(k), identity_perm(k)
    while True:
        changed = _left_weight(factors)
        kept = [f for f in factors if f != bottom]
        changed = changed or len(kept) != len(factors)
        factors = kept
        while factors and factors[0] == top:
            factors.pop(0)
            inf += 1
            changed = True
        if not changed:
            break
    form = NormalForm(k=k, inf=inf, factors=tuple(factors))
    logger.debug(f'normal_form: {len(word)} letters -> inf {form.inf}, {len(form.factors)} factors')
    return form


def equal(a: BraidWord, b: BraidWord) -> bool:
    """True iff a and b represent the same element of B_k."""
    if a.k != b.k:
        raise StrandCountError(f'Cannot compare braids on {a.k} and {b.k} strands')
    return normal_form(a) == normal_form(b)


def normal_form_to_word(form: NormalForm) -> BraidWord:
    """A braid word representing the normal form."""
    k = form.k
    half_twist = BraidWord(k, tuple((j, 1) for j in reduced_word(delta(k))))
    word = power(half_twist, form.inf) if k > 1 else identity(k)
    letters = list(word.letters)
    for factor in form.factors:
        letters.extend((j, 1) for j in reduced_word(factor))
    return BraidWord(k, tuple(letters))


def normal_form_to_json(form: NormalForm) -> dict:
    return {'inf': form.inf, 'factors': [to_one_line(f) for f in form.factors]}


def normal_form_from_json(k: int, data: dict) -> NormalForm:
    factors = tuple(from_one_line(f) for f in data.get('factors', []))
    for factor in factors:
        if len(factor) != k:
            raise StrandCountError(f'Factor {to_one_line(factor)} is not a permutation of {k} strands')
    return NormalForm(k=k, inf=int(data['inf']), factors=factors)

