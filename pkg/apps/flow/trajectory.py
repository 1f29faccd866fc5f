"""
Strand trajectories of a Hamiltonian flow on the disk.
"""
import csv
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from apps.core.conf import option
from apps.hamiltonian.evaluation import vector_field
from apps.hamiltonian.expressions import HamiltonianExpr

from .exceptions import FlowError
from .interfaces import BaseIntegrator
from .providers.scipy_integrator import ScipyIntegrator

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    One strand of a batch integration.

    ``times`` and ``states`` are the accepted steps; ``at`` evaluates the
    shared dense interpolant at arbitrary times in [0, 1].
    """

    times: np.ndarray
    states: np.ndarray
    dense: Callable
    component: int
    error_estimate: float

    def at(self, t):
        """(x, y) at scalar t, or an (n, 2) array for an array of times."""
        values = self.dense(t)
        if np.ndim(t) == 0:
            return values[2 * self.component:2 * self.component + 2]
        return values[2 * self.component:2 * self.component + 2].T

    @property
    def start(self) -> Tuple[float, float]:
        return float(self.states[0, 0]), float(self.states[0, 1])

    @property
    def end(self) -> Tuple[float, float]:
        return float(self.states[-1, 0]), float(self.states[-1, 1])


# Singleton instance
_integrator = None


def get_integrator() -> BaseIntegrator:
    """Get or create the default integrator."""
    global _integrator
    if _integrator is None:
        _integrator = ScipyIntegrator()
    return _integrator


def hamiltonian_rhs(H: HamiltonianExpr) -> Callable:
    """Right-hand side of z' = X_H(t, z) for a flat state [x0, y0, x1, y1, ...]."""

    def rhs(t, state):
        xs, ys = state[0::2], state[1::2]
        vx, vy = vector_field(H, t, xs, ys)
        derivative = np.empty_like(state)
        derivative[0::2] = vx
        derivative[1::2] = vy
        return derivative

    return rhs


def integrate_batch(
    H: HamiltonianExpr,
    points: Sequence[Tuple[float, float]],
    rtol: Optional[float] = None,
    atol: Optional[float] = None,
    integrator: Optional[BaseIntegrator] = None,
) -> List[Trajectory]:
    """
    Flow many initial conditions over [0, 1] as one system.

    Raises:
        ValueError: non-positive tolerances or no points
        FlowError: a start point outside D, step underflow or escape from D
    """
    rtol = option(rtol, 'FLOW_RTOL')
    atol = option(atol, 'FLOW_ATOL')
    if rtol <= 0 or atol <= 0:
        raise ValueError('Tolerances must be positive')
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    if not len(points):
        raise ValueError('No initial conditions given')

    limit = 1.0 + option(None, 'ESCAPE_TOLERANCE')
    radii = np.hypot(points[:, 0], points[:, 1])
    if not np.all(np.isfinite(radii)) or np.any(radii > limit):
        raise FlowError(f'Initial condition outside D (radius {float(np.max(radii)):.6g})')

    def escape(t, state):
        return limit * limit - float(np.max(state[0::2] ** 2 + state[1::2] ** 2))

    integrator = integrator or get_integrator()
    result = integrator.integrate(hamiltonian_rhs(H), points.ravel(), (0.0, 1.0), rtol, atol, escape)
    if result.ts[-1] != 1.0:
        raise FlowError(f'Integration stopped at t = {result.ts[-1]:.6g}')
    logger.debug(f'integrate_batch: {len(points)} points, {result.n_steps} steps')
    return [
        Trajectory(
            times=result.ts,
            states=result.ys[:, 2 * i:2 * i + 2],
            dense=result.dense,
            component=i,
            error_estimate=result.error_estimate,
        )
        for i in range(len(points))
    ]


def integrate(
    H: HamiltonianExpr,
    x0: Tuple[float, float],
    rtol: Optional[float] = None,
    atol: Optional[float] = None,
) -> Trajectory:
    """Flow a single point over [0, 1]."""
    return integrate_batch(H, [x0], rtol, atol)[0]


def dump_trajectories_csv(trajectories: Sequence[Trajectory], path) -> None:
    """Write accepted steps as rows strand,t,x,y with 1-based strand labels."""
    with Path(path).open('w', newline='') as handle:
        writer = csv.writer(handle)
        writer.writerow(['strand', 't', 'x', 'y'])
        for strand, trajectory in enumerate(trajectories, start=1):
            for t, (x, y) in zip(trajectory.times, trajectory.states):
                writer.writerow([strand, repr(float(t)), repr(float(x)), repr(float(y))])
