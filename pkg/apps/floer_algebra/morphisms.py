"""
Filtered morphisms between complexes and the maps they induce on window homology.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from apps.core.conf import option
from apps.core.numbers import format_rational

from .complexes import FilteredComplex, Label, homology00, window
from .exceptions import MorphismError, ShapeError
from .gf2 import extend_basis, matmul, nullspace, rank, solve

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MorphismEntry:
    source: str
    target: str
    i: int = 0
    j: int = 0

    @property
    def label(self) -> Label:
        return self.i, self.j


@dataclass(frozen=True)
class FilteredMorphism:
    """
    Z/2 map between filtered complexes raising action by at most ``shift``:
    action(target) <= action(source) + shift for every entry.
    """

    source: FilteredComplex
    target: FilteredComplex
    entries: Tuple[MorphismEntry, ...]
    shift: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, 'entries', tuple(self.entries))
        object.__setattr__(self, 'shift', Fraction(self.shift))
        if self.shift < 0:
            raise MorphismError(f'Shift must be nonnegative, got {format_rational(self.shift)}')
        for entry in self.entries:
            if entry.source not in self.source.index or entry.target not in self.target.index:
                raise ShapeError(f'Entry {entry.source} -> {entry.target} names an unknown generator')

    def matrix(self, label: Optional[Label] = None) -> np.ndarray:
        """[target, source] matrix of the ``label`` part, or of the whole map when label is None."""
        result = np.zeros((len(self.target), len(self.source)), dtype=np.uint8)
        for entry in self.entries:
            if label is None or entry.label == label:
                result[self.target.index[entry.target], self.source.index[entry.source]] ^= 1
        return result


@dataclass(frozen=True)
class InducedMap:
    """Matrix of the induced map between window homologies in the chosen bases."""

    matrix: np.ndarray
    source_window: Tuple[Fraction, Fraction]
    target_window: Tuple[Fraction, Fraction]

    @property
    def source_dim(self) -> int:
        return self.matrix.shape[1]

    @property
    def target_dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def rank(self) -> int:
        return rank(self.matrix)

    @property
    def injective(self) -> bool:
        return self.rank == self.source_dim


@dataclass(frozen=True)
class SkeletonReport:
    forward_rank: int
    backward_rank: int
    composite_rank: int
    homology_dim: int
    composition_is_identity: bool
    injective: bool
    functorial: bool

    @property
    def certified(self) -> bool:
        return self.composition_is_identity and self.injective


def contract_violations(m: FilteredMorphism) -> List[str]:
    problems = []
    for entry in m.entries:
        source, target = m.source.action(entry.source), m.target.action(entry.target)
        if target > source + m.shift:
            problems.append(
                f'{entry.source} -> {entry.target} raises action by {format_rational(target - source)} '
                f'> shift {format_rational(m.shift)}'
            )
    return problems


def identity_morphism(c: FilteredComplex, shift=0) -> FilteredMorphism:
    entries = tuple(MorphismEntry(g.name, g.name) for g in c.generators)
    return FilteredMorphism(c, c, entries, Fraction(shift))


def _same_complex(a: FilteredComplex, b: FilteredComplex) -> bool:
    return a.generators == b.generators and sorted(a.arrows, key=repr) == sorted(b.arrows, key=repr)


def compose(f: FilteredMorphism, g: FilteredMorphism, max_label: Optional[int] = None) -> FilteredMorphism:
    """
    g after f. Labels add along composed entries and shifts add.

    Raises:
        ShapeError: f.target is not g.source
        MorphismError: a composed label exceeds the supported range
    """
    max_label = option(max_label, 'MAX_LABEL')
    if not _same_complex(f.target, g.source):
        raise ShapeError('Cannot compose: the target of the first map is not the source of the second')
    coefficients: Dict[Tuple[str, str, Label], int] = {}
    for first in f.entries:
        for second in g.entries:
            if first.target != second.source:
                continue
            label = (first.i + second.i, first.j + second.j)
            if max(label) > max_label:
                raise MorphismError(f'Composed label {label} exceeds {max_label}')
            key = (first.source, second.target, label)
            coefficients[key] = coefficients.get(key, 0) ^ 1
    entries = tuple(MorphismEntry(s, t, i, j) for (s, t, (i, j)), bit in sorted(coefficients.items()) if bit)
    return FilteredMorphism(f.source, g.target, entries, f.shift + g.shift)


def is_chain_map(m: FilteredMorphism) -> bool:
    """d_target m = m d_source for the total differentials."""
    whole = m.matrix()
    return np.array_equal(matmul(m.target.matrix(), whole), matmul(whole, m.source.matrix()))


def is_chain_homotopy(f: FilteredMorphism, g: FilteredMorphism, K: FilteredMorphism) -> bool:
    """d00 K00 + K00 d00 = f00 + g00; K is given, never searched for."""
    for other in (g, K):
        if not (_same_complex(other.source, f.source) and _same_complex(other.target, f.target)):
            raise ShapeError('f, g and K must share source and target')
    k00 = K.matrix((0, 0))
    left = matmul(f.target.matrix((0, 0)), k00) ^ matmul(k00, f.source.matrix((0, 0)))
    return np.array_equal(left, f.matrix((0, 0)) ^ g.matrix((0, 0)))


def _restrict(m: FilteredMorphism, source: FilteredComplex, target: FilteredComplex) -> np.ndarray:
    result = np.zeros((len(target), len(source)), dtype=np.uint8)
    for entry in m.entries:
        if entry.label == (0, 0) and entry.source in source.index and entry.target in target.index:
            result[target.index[entry.target], source.index[entry.source]] ^= 1
    return result


def homology_basis(c: FilteredComplex) -> Tuple[np.ndarray, np.ndarray]:
    """(boundaries, representatives): a basis of im d00 and cycles completing it to a basis of ker d00."""
    d00 = c.matrix((0, 0))
    cycles = nullspace(d00)
    boundaries = extend_basis(np.zeros((len(c), 0), dtype=np.uint8), d00)
    return boundaries, extend_basis(boundaries, cycles)


def induced_map(m: FilteredMorphism, a, b) -> InducedMap:
    """
    Map H00(window(source, a, b)) -> H00(window(target, a + shift, b + shift)).

    Raises:
        MorphismError: an entry breaks the shift contract, or the (0, 0) part
            does not send cycles to cycles and boundaries to boundaries
        WindowError: a window boundary meets a spectrum
    """
    problems = contract_violations(m)
    if problems:
        raise MorphismError('; '.join(problems))
    a, b = Fraction(a), Fraction(b)
    source = window(m.source, a, b)
    target = window(m.target, a + m.shift, b + m.shift)
    f00 = _restrict(m, source, target)
    d_source, d_target = source.matrix((0, 0)), target.matrix((0, 0))

    cycles = nullspace(d_source)
    if matmul(d_target, matmul(f00, cycles)).any():
        raise MorphismError('The (0, 0) part does not send cycles to cycles')
    target_boundaries, target_classes = homology_basis(target)
    for column in matmul(f00, d_source).T:
        if column.any() and solve(target_boundaries, column) is None:
            raise MorphismError('The (0, 0) part does not send boundaries to boundaries')

    _, source_classes = homology_basis(source)
    basis = np.hstack([target_boundaries, target_classes])
    offset = target_boundaries.shape[1]
    matrix = np.zeros((target_classes.shape[1], source_classes.shape[1]), dtype=np.uint8)
    for column, cycle in enumerate(source_classes.T):
        coefficients = solve(basis, matmul(f00, cycle.reshape(-1, 1)).ravel())
        matrix[:, column] = coefficients[offset:]
    logger.debug(
        f'induced_map: H00 dims {matrix.shape[1]} -> {matrix.shape[0]}, rank {rank(matrix)}'
    )
    return InducedMap(matrix, (a, b), (a + m.shift, b + m.shift))


def theorem_skeleton_check(
    cplus: FilteredComplex,
    cminus: FilteredComplex,
    f: FilteredMorphism,
    g: FilteredMorphism,
    windows: Sequence,
) -> SkeletonReport:
    """
    Injectivity skeleton: if g f induces the same map as the shifted
    identity on the window (a, b), and that map is an isomorphism, then f
    induces an injection.

    Raises:
        ShapeError: f does not run cplus -> cminus, or g cminus -> cplus
    """
    if not (_same_complex(f.source, cplus) and _same_complex(f.target, cminus)):
        raise ShapeError('f must map cplus to cminus')
    if not (_same_complex(g.source, cminus) and _same_complex(g.target, cplus)):
        raise ShapeError('g must map cminus to cplus')
    a, b = (Fraction(v) for v in windows)

    forward = induced_map(f, a, b)
    backward = induced_map(g, a + f.shift, b + f.shift)
    composite = induced_map(compose(f, g), a, b)
    reference = induced_map(identity_morphism(cplus, f.shift + g.shift), a, b)

    dim = homology00(window(cplus, a, b))
    composition_is_identity = (
        np.array_equal(composite.matrix, reference.matrix)
        and reference.rank == dim == reference.target_dim
    )
    functorial = np.array_equal(composite.matrix, matmul(backward.matrix, forward.matrix))
    report = SkeletonReport(
        forward_rank=forward.rank,
        backward_rank=backward.rank,
        composite_rank=composite.rank,
        homology_dim=dim,
        composition_is_identity=composition_is_identity,
        injective=forward.injective,
        functorial=functorial,
    )
    if composition_is_identity and not report.injective:
        logger.error('Composite is the identity but the forward map is not injective')
    return report
