"""
Hamiltonians realizing prescribed braids, and the lower bound distinct braids keep between them.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction

from apps.braid.exceptions import StrandCountError
from apps.braid.extraction import extract_braid
from apps.braid.garside import equal
from apps.braid.words import BraidWord
from apps.flow.preservation import link_preservation_check
from apps.flow.trajectory import integrate_batch
from apps.geometry.layout import LinkLayout, basepoints, check_admissible, stability_threshold
from apps.hamiltonian.builders import adjacent_swap, concatenate
from apps.hamiltonian.expressions import HamiltonianExpr
from apps.hamiltonian.hofer import hofer_norm

from .exceptions import RealizationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Realization:
    H: HamiltonianExpr
    hofer_upper: float
    word: BraidWord


def _check_strands(layout: LinkLayout, *words: BraidWord) -> None:
    for word in words:
        if word.k != layout.k:
            raise StrandCountError(f'Braid on {word.k} strands for a link with {layout.k} components')


def realize_braid(b: BraidWord, layout: LinkLayout, verify: bool = True, certify_norm: bool = True) -> Realization:
    """
    Concatenate half-turns of adjacent circles along the letters of b.

    sigma_i^{+1} is the counterclockwise exchange of circles i and i + 1.
    With ``verify`` the braid is extracted back from the flow; the norm
    bound, when certified, bounds the braid pseudonorm from above.

    Raises:
        StrandCountError: b does not live on layout.k strands
        RealizationError: the layout is not in the equal-area setting, or
            the extracted braid differs from b
    """
    _check_strands(layout, b)
    report = check_admissible(layout)
    if not (report.admissible and report.surjective_setting):
        raise RealizationError('Braids are realized only on admissible layouts with equal areas')

    H = concatenate([adjacent_swap(layout, i, sign) for i, sign in b.letters])
    if not b.letters:
        return Realization(H, 0.0, b)

    if verify:
        preservation = link_preservation_check(H, layout)
        if not preservation.preserved:
            raise RealizationError(f'Realization of {b} does not preserve the link')
        strands = integrate_batch(H, basepoints(layout))
        realized = extract_braid(strands, layout, preservation.sigma)
        if not equal(realized, b):
            raise RealizationError(f'Realization of {b} produced {realized}')
    hofer_upper = hofer_norm(H).upper if certify_norm else float('nan')
    logger.debug(f'realize_braid: {b} with |H| <= {hofer_upper:.6g}')
    return Realization(H, hofer_upper, b)


def pseudometric_lower_bound(g: BraidWord, h: BraidWord, layout: LinkLayout) -> Fraction:
    """
    0 for equal braid types, otherwise the stability threshold: two maps
    closer than that in Hofer distance share their braid type.

    Raises:
        StrandCountError: g or h does not live on layout.k strands
        AdmissibilityError: the layout is not admissible
    """
    _check_strands(layout, g, h)
    if equal(g, h):
        return Fraction(0)
    return stability_threshold(layout)['threshold']
