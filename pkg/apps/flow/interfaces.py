"""
Abstract interface for pluggable ODE integrators.
"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np


@dataclass
class IntegrationResult:
    """Accepted step times, states and a dense interpolant over the whole span."""

    ts: np.ndarray
    ys: np.ndarray
    dense: Callable
    n_steps: int
    error_estimate: float


class BaseIntegrator(ABC):
    """Abstract base class for adaptive integrators with dense output."""

    @abstractmethod
    def integrate(
        self,
        rhs: Callable[[float, np.ndarray], np.ndarray],
        y0: np.ndarray,
        t_span: Tuple[float, float],
        rtol: float,
        atol: float,
        escape: Optional[Callable[[float, np.ndarray], float]] = None,
    ) -> IntegrationResult:
        """
        Integrate y' = rhs(t, y) over t_span.

        Args:
            rhs: Right-hand side
            y0: Initial state
            t_span: (t0, t1)
            rtol: Relative tolerance
            atol: Absolute tolerance
            escape: Optional event function; integration stops where it
                crosses zero downwards

        Returns:
            IntegrationResult

        Raises:
            FlowError: step-size underflow or escape event
        """
        pass

    @property
    @abstractmethod
    def name(self) -> str:
        pass
