"""
Spectral gaps, action clusters, and the model complexes the window argument runs on.
"""
import logging
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from apps.geometry.layout import LinkLayout, lambda_gap

from .complexes import Arrow, FilteredComplex, Generator
from .exceptions import ShapeError
from .gf2 import matmul, nullspace
from .morphisms import FilteredMorphism, MorphismEntry

logger = logging.getLogger(__name__)


def clusters(c: FilteredComplex, cluster_width) -> List[List[str]]:
    """Generator names grouped by action, splitting wherever consecutive actions differ by more than 2 * cluster_width."""
    width = 2 * Fraction(cluster_width)
    ordered = sorted(c.generators, key=lambda g: (g.action, g.name))
    groups: List[List[str]] = []
    previous = None
    for g in ordered:
        if previous is None or g.action - previous > width:
            groups.append([])
        groups[-1].append(g.name)
        previous = g.action
    return groups


def spectrum_admissible(c: FilteredComplex, gap, cluster_width) -> bool:
    """
    Every pair of actions is at least ``gap`` apart or within 2 * cluster_width,
    and no (0, 0) arrow joins two generators of one cluster.

    Raises:
        ValueError: gap <= 2 * cluster_width
    """
    gap, width = Fraction(gap), Fraction(cluster_width)
    if not gap > 2 * width:
        raise ValueError(f'gap must exceed twice the cluster width, got {gap} and {width}')
    actions = [g.action for g in c.generators]
    for n, first in enumerate(actions):
        for second in actions[n + 1:]:
            spread = abs(first - second)
            if 2 * width < spread < gap:
                logger.debug(f'spectrum_admissible: actions {first} and {second} are {spread} apart')
                return False
    cluster_of = {name: n for n, group in enumerate(clusters(c, width)) for name in group}
    for arrow in c.arrows:
        if arrow.label == (0, 0) and cluster_of[arrow.source] == cluster_of[arrow.target]:
            return False
    return True


def _morse_index(bits: int) -> int:
    return bin(bits).count('1')


def model_complex(
    layout: LinkLayout,
    morse_scale,
    captures: Sequence[int],
    suffix: str = '',
    offset=0,
) -> FilteredComplex:
    """
    Complex of a small Morse perturbation of the link.

    Each capping translate n contributes the 2^k critical points of a
    perfect Morse function on the k-torus, at action
    2 lambda_L n + morse_scale * index + offset. d00 vanishes; (0, 1)
    arrows join odd translates to the translate below.

    Raises:
        ValueError: morse_scale * k must lie in (0, lambda_L)
    """
    lam = lambda_gap(layout.areas)
    scale = Fraction(morse_scale)
    k = layout.k
    if not 0 < scale * k < lam:
        raise ValueError(f'morse_scale must satisfy 0 < k * scale < lambda_L = {lam}')
    translates = sorted(set(int(n) for n in captures))
    generators = []
    for n in translates:
        for bits in range(2 ** k):
            action = 2 * lam * n + scale * _morse_index(bits) + Fraction(offset)
            generators.append(Generator(f'x{bits:0{k}b}@{n}{suffix}', action))
    arrows = []
    for n in translates:
        if n % 2 and n - 1 in translates:
            for bits in range(2 ** k):
                arrows.append(Arrow(f'x{bits:0{k}b}@{n}{suffix}', f'x{bits:0{k}b}@{n - 1}{suffix}', 0, 1))
    return FilteredComplex(tuple(generators), tuple(arrows))


def model_continuation(cplus: FilteredComplex, cminus: FilteredComplex, shift, suffix_map=None) -> FilteredMorphism:
    """
    Identity-on-generators continuation map between two model complexes.

    ``suffix_map`` turns a cplus name into the matching cminus name.

    Raises:
        ShapeError: some generator has no counterpart
    """
    rename = suffix_map or (lambda name: name)
    entries = []
    for g in cplus.generators:
        target = rename(g.name)
        if target not in cminus.index:
            raise ShapeError(f'No counterpart of {g.name} in the target complex')
        entries.append(MorphismEntry(g.name, target))
    return FilteredMorphism(cplus, cminus, tuple(entries), Fraction(shift))


def synthetic_complex(
    rng: np.random.Generator,
    n: int,
    gap=None,
    cluster_width=None,
) -> FilteredComplex:
    """
    Random valid complex on n generators in three action layers.

    Arrows run top -> middle with one label and middle -> bottom with
    another; the second block is drawn from the left kernel of the first so
    every bigraded component of the square vanishes. With ``gap`` and
    ``cluster_width`` the actions sit in clusters that satisfy
    spectrum_admissible.
    """
    if n < 1:
        raise ValueError('n must be positive')
    cuts = np.sort(rng.integers(0, n + 1, size=2))
    sizes = [int(cuts[0]), int(cuts[1] - cuts[0]), int(n - cuts[1])]

    if gap is None:
        actions = [
            [Fraction(int(rng.integers(1, 1000)), 1000) + layer for _ in range(size)]
            for layer, size in enumerate(sizes)
        ]
    else:
        gap, width = Fraction(gap), Fraction(cluster_width)
        spacing = gap + 2 * width
        actions = []
        start = 0
        for size in sizes:
            count = int(rng.integers(1, size + 1)) if size else 0
            members = rng.integers(0, count, size=size) if count else []
            actions.append([
                (start + int(m)) * spacing + 2 * width * Fraction(int(rng.integers(0, 101)), 100)
                for m in members
            ])
            start += count

    bottom, middle, top = actions
    names = [[f'g{layer}_{m}' for m in range(len(layer_actions))] for layer, layer_actions in enumerate(actions)]
    generators = tuple(
        Generator(name, action)
        for layer_names, layer_actions in zip(names, actions)
        for name, action in zip(layer_names, layer_actions)
    )

    upper = rng.integers(0, 2, size=(len(middle), len(top))).astype(np.uint8)
    kernel = nullspace(upper.T)
    lower = matmul(rng.integers(0, 2, size=(len(bottom), kernel.shape[1])).astype(np.uint8), kernel.T)
    labels = [tuple(int(v) for v in rng.integers(0, 2, size=2)) for _ in range(2)]

    arrows = []
    for r, c in zip(*np.nonzero(upper)):
        arrows.append(Arrow(names[2][c], names[1][r], *labels[0]))
    for r, c in zip(*np.nonzero(lower)):
        arrows.append(Arrow(names[1][c], names[0][r], *labels[1]))
    return FilteredComplex(generators, tuple(arrows))
