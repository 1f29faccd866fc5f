"""
Numerical certification that a time-1 map preserves the link.
"""
import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from apps.core.conf import option
from apps.geometry.layout import LinkLayout
from apps.hamiltonian.expressions import HamiltonianExpr

from .exceptions import AmbiguousAssignmentError
from .trajectory import integrate_batch

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PreservationReport:
    """
    ``sigma`` maps component i to sigma[i - 1] (1-based); it is None when some
    component is not carried onto a single circle.
    """

    preserved: bool
    sigma: Optional[Tuple[int, ...]]
    max_deviation: float


def circle_samples(layout: LinkLayout, samples_per_circle: int) -> List[Tuple[float, float]]:
    """Equidistributed points on every component, circle by circle."""
    angles = 2 * np.pi * np.arange(samples_per_circle) / samples_per_circle
    points = []
    for circle in layout.circles:
        cx, cy = circle.center_float()
        r = float(circle.radius)
        points.extend(zip(cx + r * np.cos(angles), cy + r * np.sin(angles)))
    return points


def circle_distances(layout: LinkLayout, points: np.ndarray) -> np.ndarray:
    """Distance from each point (rows) to each circle (columns)."""
    centers = np.array([c.center_float() for c in layout.circles])
    radii = np.array([float(c.radius) for c in layout.circles])
    offsets = points[:, None, :] - centers[None, :, :]
    return np.abs(np.hypot(offsets[..., 0], offsets[..., 1]) - radii[None, :])


def link_preservation_check(
    H: HamiltonianExpr,
    layout: LinkLayout,
    samples_per_circle: Optional[int] = None,
    tol: Optional[float] = None,
) -> PreservationReport:
    """
    Flow samples of every L_i to time 1 and read off the component permutation.

    Raises:
        ValueError: fewer than 8 samples per circle
        AmbiguousAssignmentError: an image point is within tol of two circles
    """
    samples_per_circle = option(samples_per_circle, 'PRESERVATION_SAMPLES')
    tol = option(tol, 'PRESERVATION_TOL')
    if samples_per_circle < 8:
        raise ValueError(f'samples_per_circle must be at least 8, got {samples_per_circle}')

    trajectories = integrate_batch(H, circle_samples(layout, samples_per_circle))
    images = np.array([trajectory.end for trajectory in trajectories])
    distances = circle_distances(layout, images)

    close = distances < tol
    ambiguous = np.flatnonzero(close.sum(axis=1) > 1)
    if len(ambiguous):
        sample = int(ambiguous[0])
        raise AmbiguousAssignmentError(
            f'Image of sample {sample % samples_per_circle} on circle '
            f'{sample // samples_per_circle + 1} is within {tol} of two circles'
        )

    nearest = np.argmin(distances, axis=1)
    max_deviation = float(np.max(distances[np.arange(len(images)), nearest]))

    sigma = []
    for i in range(layout.k):
        block = slice(i * samples_per_circle, (i + 1) * samples_per_circle)
        targets = set(nearest[block].tolist())
        if len(targets) != 1 or not np.all(close[block].any(axis=1)):
            sigma = None
            break
        sigma.append(targets.pop() + 1)

    preserved = sigma is not None and sorted(sigma) == list(range(1, layout.k + 1))
    report = PreservationReport(
        preserved=preserved,
        sigma=tuple(sigma) if preserved else None,
        max_deviation=max_deviation,
    )
    logger.debug(f'link_preservation_check: preserved={preserved} sigma={report.sigma} '
                 f'deviation={max_deviation:.3e}')
    return report


def compose_permutations(first: Sequence[int], second: Sequence[int]) -> Tuple[int, ...]:
    """Permutation of `first` followed by `second`: i -> second(first(i)), 1-based."""
    if len(first) != len(second):
        raise ValueError('Permutations act on different numbers of components')
    return tuple(second[j - 1] for j in first)
