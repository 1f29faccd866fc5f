"""
Hofer norm |H|_(1,inf) = integral over t of (max_D H_t - min_D H_t), as an interval.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import simpson, trapezoid

from apps.core.conf import option

from .evaluation import evaluate, gradient
from .exceptions import HoferError
from .expressions import HamiltonianExpr

logger = logging.getLogger(__name__)

PATCH = np.arange(-2, 3)


@dataclass(frozen=True)
class HoferEstimate:
    lower: float
    upper: float
    grid_resolution: int
    refinement_depth: int
    t_nodes: int


@dataclass(frozen=True)
class NodeOscillation:
    """Sampled extremes of H_t and the gradient slack around them."""

    t: float
    maximum: float
    minimum: float
    slack: float

    @property
    def lower(self) -> float:
        return self.maximum - self.minimum

    @property
    def upper(self) -> float:
        return self.maximum - self.minimum + self.slack


def _disk_samples(grid: int) -> Tuple[np.ndarray, np.ndarray]:
    axis = np.linspace(-1.0, 1.0, grid)
    xx, yy = np.meshgrid(axis, axis)
    inside = xx * xx + yy * yy <= 1.0
    ring = np.linspace(0.0, 2 * np.pi, 4 * grid, endpoint=False)
    xs = np.concatenate([xx[inside], np.cos(ring)])
    ys = np.concatenate([yy[inside], np.sin(ring)])
    return xs, ys


def _patch(center: Tuple[float, float], spacing: float) -> Tuple[np.ndarray, np.ndarray]:
    dx, dy = np.meshgrid(PATCH * spacing, PATCH * spacing)
    xs = (center[0] + dx).ravel()
    ys = (center[1] + dy).ravel()
    inside = (xs * xs + ys * ys <= 1.0) | ((dx == 0) & (dy == 0)).ravel()
    return xs[inside], ys[inside]


def _values(H: HamiltonianExpr, t: float, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    values = evaluate(H, t, xs, ys)
    if not np.all(np.isfinite(values)):
        raise HoferError(f'Non-finite value of H at t = {t}')
    return values


def _steepest(H: HamiltonianExpr, t: float, xs: np.ndarray, ys: np.ndarray) -> float:
    hx, hy = gradient(H, t, xs, ys)
    steepest = float(np.max(np.hypot(hx, hy)))
    if not math.isfinite(steepest):
        raise HoferError(f'Non-finite gradient of H at t = {t}')
    return steepest


def node_oscillation(H: HamiltonianExpr, t: float, grid: int, refine: int) -> NodeOscillation:
    """
    Grid search for max/min of H_t, then `refine` rounds of halved patches around each.

    Every point of D lies within one cell diagonal of a sample, so H_t never
    exceeds the sampled extremes by more than the steepest sampled gradient
    times that diagonal. Around the refined extremizers the patch gradient
    times the patch diagonal bounds the local error.
    """
    spacing = 2.0 / (grid - 1)
    xs, ys = _disk_samples(grid)
    values = _values(H, t, xs, ys)
    steepest = _steepest(H, t, xs, ys)

    extremes = {}
    for sign in (1.0, -1.0):
        best = int(np.argmax(sign * values))
        sampled = float(values[best])
        point, value = (float(xs[best]), float(ys[best])), sampled
        px, py = np.array([point[0]]), np.array([point[1]])
        step = spacing
        for _ in range(refine):
            step /= 2
            px, py = _patch(point, step)
            local = _values(H, t, px, py)
            idx = int(np.argmax(sign * local))
            if sign * local[idx] > sign * value:
                point, value = (float(px[idx]), float(py[idx])), float(local[idx])
        if refine == 0:
            px, py = _patch(point, spacing)
        patch_steepest = _steepest(H, t, px, py)
        steepest = max(steepest, patch_steepest)
        extremes[sign] = (sampled, value, patch_steepest * math.sqrt(2.0) * step)

    guard = steepest * math.sqrt(2.0) * spacing
    (grid_max, maximum, local_max), (grid_min, minimum, local_min) = extremes[1.0], extremes[-1.0]
    upper_max = max(maximum + local_max, grid_max + guard)
    lower_min = min(minimum - local_min, grid_min - guard)
    return NodeOscillation(
        t=t, maximum=maximum, minimum=minimum, slack=(upper_max - maximum) + (minimum - lower_min),
    )


def _integrate(ts: np.ndarray, values: np.ndarray) -> Tuple[float, float]:
    """Composite Simpson plus an error estimate against the coarser rule."""
    fine = float(simpson(values, x=ts))
    if len(ts) % 2 == 1 and len(ts) >= 5:
        coarse = float(simpson(values[::2], x=ts[::2]))
    else:
        coarse = float(trapezoid(values, x=ts))
    return fine, abs(fine - coarse)


def _estimate(H: HamiltonianExpr, ts: np.ndarray, grid: int, refine: int, workers: int) -> HoferEstimate:
    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        nodes = list(pool.map(lambda t: node_oscillation(H, float(t), grid, refine), ts))

    low, low_err = _integrate(ts, np.array([n.lower for n in nodes]))
    high, high_err = _integrate(ts, np.array([n.upper for n in nodes]))
    estimate = HoferEstimate(
        lower=max(0.0, low - low_err),
        upper=max(0.0, high + high_err),
        grid_resolution=grid,
        refinement_depth=refine,
        t_nodes=len(ts),
    )
    if not (math.isfinite(estimate.lower) and math.isfinite(estimate.upper)):
        raise HoferError('Hofer estimate is not finite')
    return estimate


def hofer_norm(
    H: HamiltonianExpr,
    t_nodes: Optional[int] = None,
    grid: Optional[int] = None,
    refine: Optional[int] = None,
    workers: Optional[int] = None,
    width: Optional[float] = None,
    max_grid: Optional[int] = None,
) -> HoferEstimate:
    """
    Bracket the Hofer norm of H.

    The lower end integrates the sampled oscillations; the upper end adds the
    gradient slack of every node. Both ends are widened by the Simpson error
    estimate. With ``width`` the spatial grid is doubled until the interval
    is at most that wide or the next grid would exceed ``max_grid``.

    Raises:
        ValueError: t_nodes < 2 or grid < 8
        HoferError: H or its gradient is not finite somewhere on D
    """
    t_nodes = option(t_nodes, 'HOFER_T_NODES')
    grid = option(grid, 'HOFER_GRID')
    refine = option(refine, 'HOFER_REFINE')
    workers = option(workers, 'DEFAULT_THREADS')
    width = option(width, 'HOFER_WIDTH')
    max_grid = option(max_grid, 'HOFER_MAX_GRID')
    if t_nodes < 2:
        raise ValueError(f't_nodes must be at least 2, got {t_nodes}')
    if grid < 8:
        raise ValueError(f'grid must be at least 8, got {grid}')
    if refine < 0:
        raise ValueError(f'refine must be nonnegative, got {refine}')
    if width is not None and width <= 0:
        raise ValueError(f'width must be positive, got {width}')

    if H.root.is_constant():
        return HoferEstimate(0.0, 0.0, grid, refine, t_nodes)

    ts = np.linspace(0.0, 1.0, t_nodes)
    estimate = _estimate(H, ts, grid, refine, workers)
    while width is not None and estimate.upper - estimate.lower > width and 2 * grid <= max_grid:
        grid *= 2
        estimate = _estimate(H, ts, grid, refine, workers)
    logger.debug(
        f'hofer_norm: [{estimate.lower:.6g}, {estimate.upper:.6g}] '
        f'({t_nodes} nodes, grid {grid}, refine {refine})'
    )
    return estimate
