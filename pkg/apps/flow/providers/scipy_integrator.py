"""
Dormand-Prince RK5(4) integrator backed by scipy.integrate.solve_ivp.
"""
import logging

import numpy as np
from scipy.integrate import solve_ivp

from ..exceptions import FlowError
from ..interfaces import BaseIntegrator, IntegrationResult

logger = logging.getLogger(__name__)


class ScipyIntegrator(BaseIntegrator):
    """Adaptive RK45 with its free fourth-order dense output."""

    name = 'scipy-RK45'

    def __init__(self, method: str = 'RK45'):
        self.method = method

    def integrate(self, rhs, y0, t_span, rtol, atol, escape=None) -> IntegrationResult:
        events = None
        if escape is not None:
            escape.terminal = True
            escape.direction = -1
            events = [escape]

        solution = solve_ivp(
            rhs, t_span, np.asarray(y0, dtype=float),
            method=self.method, rtol=rtol, atol=atol, dense_output=True, events=events,
        )
        if solution.status == -1:
            raise FlowError(f'Integration failed: {solution.message}')
        if solution.status == 1:
            t_escape = float(solution.t_events[0][0])
            raise FlowError(f'State left the disk at t = {t_escape:.6g}: H is not compactly supported in D')
        if not np.all(np.isfinite(solution.y)):
            raise FlowError('Integration produced non-finite states')

        n_steps = len(solution.t) - 1
        scale = float(np.max(np.abs(solution.y))) if solution.y.size else 0.0
        # per-step tolerance summed over accepted steps
        error_estimate = max(n_steps, 1) * (atol + rtol * scale)
        logger.debug(f'{self.name}: {n_steps} steps, {solution.nfev} evaluations')
        return IntegrationResult(
            ts=solution.t,
            ys=solution.y.T,
            dense=solution.sol,
            n_steps=n_steps,
            error_estimate=error_estimate,
        )
