"""
Action-filtered Z/2 chain complexes with bigraded differentials.

An arrow from g to h labelled (i, j) is a coefficient of the (i, j)
component of the differential; the total differential is the sum over all
labels. Matrices are indexed [target, source] in generator order.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

import numpy as np

from apps.core.conf import option
from apps.core.numbers import format_rational

from .exceptions import WindowError
from .gf2 import matmul, rank

logger = logging.getLogger(__name__)

Label = Tuple[int, int]


@dataclass(frozen=True)
class Generator:
    name: str
    action: Fraction


@dataclass(frozen=True)
class Arrow:
    source: str
    target: str
    i: int = 0
    j: int = 0

    @property
    def label(self) -> Label:
        return self.i, self.j


@dataclass(frozen=True)
class FilteredComplex:
    generators: Tuple[Generator, ...] = ()
    arrows: Tuple[Arrow, ...] = ()
    index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, 'generators', tuple(self.generators))
        object.__setattr__(self, 'arrows', tuple(self.arrows))
        object.__setattr__(self, 'index', {g.name: n for n, g in enumerate(self.generators)})

    def __len__(self):
        return len(self.generators)

    def action(self, name: str) -> Fraction:
        return self.generators[self.index[name]].action

    def names(self) -> List[str]:
        return [g.name for g in self.generators]

    def labels(self) -> List[Label]:
        return sorted({a.label for a in self.arrows})

    def matrix(self, label: Optional[Label] = None) -> np.ndarray:
        """Matrix of the ``label`` component, or of the total differential when label is None."""
        n = len(self.generators)
        result = np.zeros((n, n), dtype=np.uint8)
        for arrow in self.arrows:
            if label is None or arrow.label == label:
                result[self.index[arrow.target], self.index[arrow.source]] ^= 1
        return result


@dataclass(frozen=True)
class ComplexReport:
    valid: bool
    violations: Tuple[str, ...]
    d00_squared_zero: bool
    d10_anticommutes: bool


def _component_of_square(c: FilteredComplex, total: Label) -> np.ndarray:
    """(a, b) component of the square of the differential: sum of d_l d_m with l + m = (a, b)."""
    n = len(c)
    result = np.zeros((n, n), dtype=np.uint8)
    labels = c.labels()
    for left in labels:
        right = (total[0] - left[0], total[1] - left[1])
        if right in labels:
            result ^= matmul(c.matrix(left), c.matrix(right))
    return result


def validate(c: FilteredComplex, max_label: Optional[int] = None) -> ComplexReport:
    """
    Check the invariants of a filtered complex; problems are reported, never raised.

    Besides the type invariants this checks the identities d00 d00 = 0 and
    d10 d00 + d00 d10 = 0 that follow from d d = 0 by bigrading.
    """
    max_label = option(max_label, 'MAX_LABEL')
    violations = []

    names = c.names()
    if len(set(names)) != len(names):
        violations.append('Duplicate generator names')

    seen = set()
    known = []
    for arrow in c.arrows:
        key = (arrow.source, arrow.target, arrow.label)
        if arrow.source not in c.index or arrow.target not in c.index:
            violations.append(f'Arrow {arrow.source} -> {arrow.target} names an unknown generator')
            continue
        if key in seen:
            violations.append(f'Arrow {arrow.source} -> {arrow.target} {arrow.label} listed twice')
        seen.add(key)
        if not (0 <= arrow.i <= max_label and 0 <= arrow.j <= max_label):
            violations.append(f'Arrow {arrow.source} -> {arrow.target} has label {arrow.label} outside 0..{max_label}')
        if not c.action(arrow.target) < c.action(arrow.source):
            violations.append(
                f'Arrow {arrow.source} -> {arrow.target} does not decrease the action '
                f'({format_rational(c.action(arrow.source))} -> {format_rational(c.action(arrow.target))})'
            )
        known.append(arrow)

    checked = FilteredComplex(c.generators, known)
    total = checked.matrix()
    if matmul(total, total).any():
        violations.append('The total differential does not square to zero')
    d00_squared_zero = not _component_of_square(checked, (0, 0)).any()
    d10_anticommutes = not _component_of_square(checked, (1, 0)).any()
    if not d00_squared_zero:
        violations.append('d00 d00 is not zero')
    if not d10_anticommutes:
        violations.append('d10 d00 + d00 d10 is not zero')

    report = ComplexReport(
        valid=not violations,
        violations=tuple(violations),
        d00_squared_zero=d00_squared_zero,
        d10_anticommutes=d10_anticommutes,
    )
    logger.debug(f'validate: {len(c)} generators, {len(c.arrows)} arrows, {len(violations)} violations')
    return report


def window(c: FilteredComplex, a, b) -> FilteredComplex:
    """
    Quotient complex of generators with action in the open interval (a, b).

    Raises:
        WindowError: a >= b, or a generator action equals a or b
    """
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise WindowError(f'Window ({format_rational(a)}, {format_rational(b)}) is empty or reversed')
    for g in c.generators:
        if g.action in (a, b):
            raise WindowError(
                f'Generator {g.name} has action {format_rational(g.action)} on the window boundary'
            )
    kept = tuple(g for g in c.generators if a < g.action < b)
    names = {g.name for g in kept}
    arrows = tuple(arrow for arrow in c.arrows if arrow.source in names and arrow.target in names)
    return FilteredComplex(kept, arrows)


def homology00(c: FilteredComplex) -> int:
    """dim ker d00 - dim im d00 over Z/2."""
    d00 = c.matrix((0, 0))
    r = rank(d00)
    return len(c) - 2 * r


def shifted(c: FilteredComplex, shift, suffix: str = '') -> FilteredComplex:
    """Copy of c with every action moved by ``shift``."""
    shift = Fraction(shift)
    generators = tuple(Generator(g.name + suffix, g.action + shift) for g in c.generators)
    arrows = tuple(Arrow(a.source + suffix, a.target + suffix, a.i, a.j) for a in c.arrows)
    return FilteredComplex(generators, arrows)


def spectrum(c: FilteredComplex) -> List[Fraction]:
    return sorted(g.action for g in c.generators)


def make_complex(generators: Iterable[Tuple[str, object]], arrows: Iterable[Tuple] = ()) -> FilteredComplex:
    """Complex from (name, action) pairs and (source, target[, i, j]) tuples."""
    return FilteredComplex(
        tuple(Generator(name, Fraction(action)) for name, action in generators),
        tuple(Arrow(*arrow) for arrow in arrows),
    )
