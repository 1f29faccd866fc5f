"""
Minimal pairwise distance between strands over [0, 1].
"""
import itertools
import logging
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .trajectory import Trajectory

logger = logging.getLogger(__name__)


def strand_separation(trajectories: Sequence[Trajectory], samples: int = 1025) -> float:
    """
    Minimum over t in [0, 1] of min_{i<j} |gamma_i(t) - gamma_j(t)|.

    Dense-output samples locate the minimum of each pair; a bounded scalar
    minimisation over the neighbouring sample interval refines it.
    """
    if len(trajectories) < 2:
        raise ValueError('Need at least two trajectories')
    ts = np.linspace(0.0, 1.0, samples)
    paths = [trajectory.at(ts) for trajectory in trajectories]

    best = np.inf
    for i, j in itertools.combinations(range(len(trajectories)), 2):
        gaps = np.hypot(*(paths[i] - paths[j]).T)
        index = int(np.argmin(gaps))
        value = float(gaps[index])
        lo, hi = ts[max(index - 1, 0)], ts[min(index + 1, samples - 1)]
        if value > 0 and hi > lo:
            a, b = trajectories[i], trajectories[j]
            refined = minimize_scalar(
                lambda t: float(np.hypot(*(a.at(t) - b.at(t)))),
                bounds=(lo, hi), method='bounded', options={'xatol': 1e-12},
            )
            value = min(value, float(refined.fun))
        best = min(best, value)
    logger.debug(f'strand_separation: {best:.6g} over {len(trajectories)} strands')
    return float(best)
