"""
Evaluation, forward-mode differentiation and support checks for Hamiltonians.
"""
import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from apps.core.conf import option

from .dual import Dual
from .exceptions import SupportError
from .expressions import HamiltonianExpr

logger = logging.getLogger(__name__)


def evaluate(H: HamiltonianExpr, t, x, y):
    """
    Evaluate H at (t, x, y).

    Scalars give a float; numpy arrays are evaluated elementwise.

    Raises:
        EvaluationError: division by zero, with the offending subexpression
    """
    value = H.root.evaluate({'t': t, 'x': x, 'y': y})
    if np.ndim(value) == 0 and np.ndim(x) == 0 and np.ndim(y) == 0:
        return float(value)
    return np.broadcast_to(value, np.broadcast(np.asarray(x), np.asarray(y)).shape).astype(float)


def gradient(H: HamiltonianExpr, t, x, y) -> Tuple:
    """Spatial partials (dH/dx, dH/dy) by one dual-number pass."""
    shape = np.broadcast(np.asarray(x), np.asarray(y)).shape
    if shape:
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        ones, zeros = np.ones_like(x), np.zeros_like(x)
    else:
        x, y = float(x), float(y)
        ones, zeros = 1.0, 0.0
    result = H.root.evaluate({'t': t, 'x': Dual(x, ones, zeros), 'y': Dual(y, zeros, ones)})
    if not isinstance(result, Dual):
        result = Dual(result)
    if not shape:
        return float(result.dx), float(result.dy)
    hx = np.broadcast_to(result.dx, shape).astype(float)
    hy = np.broadcast_to(result.dy, shape).astype(float)
    return hx, hy


def vector_field(H: HamiltonianExpr, t, x, y) -> Tuple:
    """
    Hamiltonian vector field for omega = dx ^ dy.

    omega(X_H, .) = dH gives X_H = (dH/dy, -dH/dx).
    """
    hx, hy = gradient(H, t, x, y)
    return hy, -hx


def derivative_check(
    H: HamiltonianExpr,
    samples: int = 100,
    h: float = 1e-5,
    seed: int = 0,
    radii: Optional[Sequence[float]] = None,
) -> float:
    """
    Compare dual-number partials with central finite differences.

    Args:
        H: Hamiltonian
        samples: Number of random sample points
        h: Finite-difference step
        seed: Random seed
        radii: Optional (r_min, r_max) annulus to draw points from

    Returns:
        Worst relative error |a - b| / max(1, |a|, |b|) over all partials
    """
    if h <= 0:
        raise ValueError('h must be positive')
    rng = np.random.default_rng(seed)
    r_min, r_max = radii if radii is not None else (0.0, 0.95)
    r = np.sqrt(rng.uniform(r_min ** 2, r_max ** 2, samples))
    theta = rng.uniform(0.0, 2 * np.pi, samples)
    ts = rng.uniform(0.0, 1.0, samples)
    xs, ys = r * np.cos(theta), r * np.sin(theta)

    worst = 0.0
    for t, x, y in zip(ts, xs, ys):
        hx, hy = gradient(H, t, x, y)
        fx = (evaluate(H, t, x + h, y) - evaluate(H, t, x - h, y)) / (2 * h)
        fy = (evaluate(H, t, x, y + h) - evaluate(H, t, x, y - h)) / (2 * h)
        for exact, approx in ((hx, fx), (hy, fy)):
            error = abs(exact - approx) / max(1.0, abs(exact), abs(approx))
            worst = max(worst, error)
    logger.debug(f'derivative_check: {samples} samples, worst relative error {worst:.3e}')
    return worst


def check_support(
    H: HamiltonianExpr,
    collar: Optional[float] = None,
    tol: Optional[float] = None,
    angles: int = 256,
    radii: int = 5,
    times: int = 9,
) -> float:
    """
    Verify H vanishes on the annulus 1 - collar <= r <= 1.

    Returns:
        The largest |H| seen on the annulus

    Raises:
        SupportError: |H| reaches tol somewhere on the annulus
    """
    collar = option(collar, 'SUPPORT_COLLAR')
    tol = option(tol, 'SUPPORT_TOL')
    rr, aa = np.meshgrid(np.linspace(1.0 - collar, 1.0, radii), np.linspace(0, 2 * np.pi, angles, endpoint=False))
    xs, ys = (rr * np.cos(aa)).ravel(), (rr * np.sin(aa)).ravel()
    worst = 0.0
    for t in np.linspace(0.0, 1.0, times):
        worst = max(worst, float(np.max(np.abs(evaluate(H, t, xs, ys)))))
    if not worst < tol:
        raise SupportError(
            f'|H| reaches {worst:.3e} within the collar of width {collar} near the boundary of D'
        )
    return worst
