"""
Braid type of a link-preserving flow.

The strands of the flow are closed up along the target circles and read as a
loop in the configuration space of k points, projected onto a line. Words
taken at different projection angles are made comparable by conjugating
with the braid swept out by turning the projection frame from a fixed
reference angle to the chosen one.
"""
import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from apps.core.conf import option
from apps.flow.separation import strand_separation
from apps.flow.trajectory import Trajectory
from apps.geometry.layout import LinkLayout, basepoints

from .exceptions import DegenerateProjectionError, ExtractionError, StrandCountError
from .permutations import delta, reduced_word
from .words import BraidWord, free_reduce, invert

logger = logging.getLogger(__name__)

ORIENTATIONS = ('shorter', 'ccw', 'cw')
TWO_PI = 2 * math.pi
RETRY_OFFSET = 0.0137


@dataclass(frozen=True)
class ClosureSpec:
    """How each strand returns along its target circle: the shorter arc (ties ccw), or a fixed direction."""

    orientation: str = 'shorter'
    samples: Optional[int] = None

    def __post_init__(self):
        if self.orientation not in ORIENTATIONS:
            raise ValueError(f'orientation must be one of {", ".join(ORIENTATIONS)}, got {self.orientation!r}')
        if self.samples is not None and self.samples < 8:
            raise ValueError(f'closure needs at least 8 samples, got {self.samples}')


@dataclass(frozen=True)
class ClosureArc:
    center: Tuple[float, float]
    start_radius: float
    end_radius: float
    start_angle: float
    sweep: float

    def at(self, lam):
        angle = self.start_angle + lam * self.sweep
        radius = self.start_radius + lam * (self.end_radius - self.start_radius)
        return np.stack([self.center[0] + radius * np.cos(angle), self.center[1] + radius * np.sin(angle)], axis=-1)


def closure_arc(end: Tuple[float, float], circle, base_angle: float, orientation: str) -> ClosureArc:
    """Arc on ``circle`` from a strand endpoint to the basepoint at ``base_angle``."""
    cx, cy = circle.center_float()
    start_angle = math.atan2(end[1] - cy, end[0] - cx)
    ccw = (base_angle - start_angle) % TWO_PI
    cw = -((start_angle - base_angle) % TWO_PI)
    if orientation == 'ccw':
        sweep = ccw
    elif orientation == 'cw':
        sweep = cw
    else:
        sweep = ccw if ccw <= -cw else cw
    return ClosureArc(
        center=(cx, cy),
        start_radius=math.hypot(end[0] - cx, end[1] - cy),
        end_radius=float(circle.radius),
        start_angle=start_angle,
        sweep=sweep,
    )


class ClosedBraid:
    """Strand positions of the closed braid for s in [0, 2]: flow on [0, 1], closure arcs on [1, 2]."""

    def __init__(self, trajectories: Sequence[Trajectory], arcs: Sequence[ClosureArc], flow_samples: int, closure_samples: int):
        self.trajectories = list(trajectories)
        self.arcs = list(arcs)
        flow_s = np.linspace(0.0, 1.0, flow_samples + 1)
        lam = np.linspace(0.0, 1.0, closure_samples + 1)[1:]
        self.s = np.concatenate([flow_s, 1.0 + lam])
        self.points = np.stack([
            np.concatenate([trajectory.at(flow_s), arc.at(lam)])
            for trajectory, arc in zip(self.trajectories, self.arcs)
        ])

    def point(self, strand: int, s: float) -> np.ndarray:
        if s <= 1.0:
            return np.asarray(self.trajectories[strand].at(s))
        return self.arcs[strand].at(s - 1.0)


def frame(points: np.ndarray, theta: float) -> Tuple[np.ndarray, np.ndarray]:
    """Projection coordinates u = x cos(theta) + y sin(theta), v = -x sin(theta) + y cos(theta)."""
    x, y = points[..., 0], points[..., 1]
    c, s = math.cos(theta), math.sin(theta)
    return x * c + y * s, -x * s + y * c


def _pair_crossings(loop: ClosedBraid, p: int, q: int, theta: float, xtol: float, tangency_tol: float) -> List[float]:
    """Times in (0, 2) where strands p and q exchange u-order."""
    s = loop.s
    u, _ = frame(loop.points[[p, q]], theta)
    d = u[0] - u[1]

    def diff(x):
        return float(frame(loop.point(p, x), theta)[0] - frame(loop.point(q, x), theta)[0])

    if d[0] == 0 or d[-1] == 0:
        raise DegenerateProjectionError(f'Strands {p + 1} and {q + 1} share a u-coordinate at the basepoints')

    signs = np.sign(d)
    roots = []
    nonzero = np.flatnonzero(signs)
    for a, b in zip(nonzero[:-1], nonzero[1:]):
        if b == a + 1:
            if signs[a] != signs[b]:
                roots.append(brentq(diff, s[a], s[b], xtol=xtol))
        elif signs[a] != signs[b] and b == a + 2:
            roots.append(float(s[a + 1]))
        else:
            raise DegenerateProjectionError(
                f'Strands {p + 1} and {q + 1} touch in projection without crossing near s = {s[a + 1]:.6g}'
            )

    # A dip below zero between samples is bounded by the local second difference.
    mags = np.abs(d)
    same = (signs[:-2] == signs[1:-1]) & (signs[1:-1] == signs[2:])
    lowest = (mags[1:-1] <= mags[:-2]) & (mags[1:-1] <= mags[2:])
    for m in np.flatnonzero(same & lowest) + 1:
        rise = max(mags[m - 1], mags[m + 1]) - mags[m]
        if mags[m] > 4 * rise + tangency_tol:
            continue
        sign = float(signs[m])
        result = minimize_scalar(
            lambda x: sign * diff(x), bounds=(s[m - 1], s[m + 1]), method='bounded', options={'xatol': xtol},
        )
        if result.fun < 0:
            roots.append(brentq(diff, s[m - 1], result.x, xtol=xtol))
            roots.append(brentq(diff, result.x, s[m + 1], xtol=xtol))
        elif result.fun <= tangency_tol:
            raise DegenerateProjectionError(
                f'Tangential crossing of strands {p + 1} and {q + 1} at s = {result.x:.6g}'
            )
    return roots


def _read_crossings(loop: ClosedBraid, theta: float, workers: int) -> List[Tuple[int, int]]:
    """Word of the closed braid in the frame at angle theta."""
    xtol = option(None, 'CROSSING_TOL')
    tangency_tol = option(None, 'TANGENCY_TOL')
    window = option(None, 'COINCIDENCE_WINDOW')
    k = len(loop.trajectories)
    pairs = list(itertools.combinations(range(k), 2))

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        found = list(pool.map(lambda pq: _pair_crossings(loop, pq[0], pq[1], theta, xtol, tangency_tol), pairs))
    events = sorted((s, p, q) for (p, q), roots in zip(pairs, found) for s in roots)

    for index, (s, p, q) in enumerate(events):
        for other in events[index + 1:]:
            if other[0] - s >= window:
                break
            if {p, q} & {other[1], other[2]}:
                raise DegenerateProjectionError(
                    f'Crossings of strands {p + 1}, {q + 1} and {other[1] + 1}, {other[2] + 1} '
                    f'coincide near s = {s:.6g}'
                )

    u0, _ = frame(loop.points[:, 0], theta)
    order = [int(i) for i in np.argsort(u0)]
    letters = []
    for s, p, q in events:
        i, j = order.index(p), order.index(q)
        if abs(i - j) != 1:
            raise DegenerateProjectionError(f'Strands {p + 1} and {q + 1} cross while not adjacent near s = {s:.6g}')
        left = order[min(i, j)]
        right = order[max(i, j)]
        _, v_left = frame(loop.point(left, s), theta)
        _, v_right = frame(loop.point(right, s), theta)
        letters.append((min(i, j) + 1, 1 if float(v_left) < float(v_right) else -1))
        order[i], order[j] = order[j], order[i]

    u1, _ = frame(loop.points[:, -1], theta)
    if order != [int(i) for i in np.argsort(u1)]:
        raise DegenerateProjectionError('Crossings do not account for the final strand order')
    return letters


def frame_sweep(points: Sequence[Tuple[float, float]], start: float, stop: float) -> BraidWord:
    """
    Braid of fixed points seen through a frame turning from ``start`` to ``stop``.

    Points that line up in projection at the same angle form a block of
    adjacent positions whose order reverses; the block contributes its
    half-twist, negative while the frame turns counterclockwise.
    """
    pts = np.asarray(points, dtype=float)
    k = len(pts)
    window = option(None, 'COINCIDENCE_WINDOW')
    lo, hi = min(start, stop), max(start, stop)
    events = []
    for p, q in itertools.combinations(range(k), 2):
        dx, dy = pts[p] - pts[q]
        if dx == 0 and dy == 0:
            raise ExtractionError(f'Basepoints {p + 1} and {q + 1} coincide')
        phase = math.atan2(dy, dx) + math.pi / 2
        for n in range(math.ceil((lo - phase) / math.pi) - 1, math.floor((hi - phase) / math.pi) + 2):
            angle = phase + n * math.pi
            if abs(angle - start) < window:
                raise ExtractionError(f'Basepoints {p + 1} and {q + 1} share a u-coordinate at the reference angle')
            if abs(angle - stop) < window:
                raise DegenerateProjectionError(f'Basepoints {p + 1} and {q + 1} share a u-coordinate at angle {stop:.6g}')
            if lo < angle < hi:
                events.append((angle, p, q))
    events.sort(reverse=stop < start)

    sign = -1 if stop > start else 1
    u0, _ = frame(pts, start)
    order = [int(i) for i in np.argsort(u0)]
    letters = []
    index = 0
    while index < len(events):
        cluster = [events[index]]
        while index + len(cluster) < len(events) and abs(events[index + len(cluster)][0] - cluster[0][0]) < window:
            cluster.append(events[index + len(cluster)])
        index += len(cluster)

        groups = {}
        for _, p, q in cluster:
            merged = groups.get(p, {p}) | groups.get(q, {q})
            for member in merged:
                groups[member] = merged
        for group in {frozenset(g) for g in groups.values()}:
            positions = sorted(order.index(member) for member in group)
            if positions[-1] - positions[0] + 1 != len(positions):
                raise ExtractionError('Basepoints line up in projection without being adjacent')
            first = positions[0]
            twist = BraidWord(k, tuple((first + j, 1) for j in reduced_word(delta(len(positions)))))
            letters.extend((twist if sign > 0 else invert(twist)).letters)
            order[first:positions[-1] + 1] = order[first:positions[-1] + 1][::-1]

    u1, _ = frame(pts, stop)
    if order != [int(i) for i in np.argsort(u1)]:
        raise ExtractionError('Frame sweep does not account for the final basepoint order')
    return BraidWord(k, tuple(letters))


def _validate(trajectories, layout: LinkLayout, sigma, bases, tol) -> None:
    k = layout.k
    if len(trajectories) != k or len(sigma) != k:
        raise StrandCountError(
            f'{len(trajectories)} trajectories and a permutation of {len(sigma)} for a {k}-component link'
        )
    if sorted(sigma) != list(range(1, k + 1)):
        raise ExtractionError(f'sigma {tuple(sigma)} is not a permutation of 1..{k}')
    for i, trajectory in enumerate(trajectories):
        start = trajectory.start
        if math.hypot(start[0] - bases[i][0], start[1] - bases[i][1]) > tol:
            raise ExtractionError(f'Strand {i + 1} does not start at its basepoint')
        circle = layout.circles[sigma[i] - 1]
        cx, cy = circle.center_float()
        end = trajectory.end
        if abs(math.hypot(end[0] - cx, end[1] - cy) - float(circle.radius)) > tol:
            raise ExtractionError(f'Strand {i + 1} does not end on circle {sigma[i]}')
    if k > 1:
        margin = option(None, 'SEPARATION_MARGIN')
        separation = strand_separation(trajectories)
        if separation < margin:
            raise ExtractionError(f'Strand separation {separation:.3e} is below the margin {margin:.3e}')


def extract_braid(
    trajectories: Sequence[Trajectory],
    layout: LinkLayout,
    sigma: Sequence[int],
    closure: Optional[ClosureSpec] = None,
    projection_angle: float = 0.0,
    basepoint_angles: Optional[Sequence[float]] = None,
    reference_angle: float = 0.0,
    workers: Optional[int] = None,
) -> BraidWord:
    """
    Braid word of the strands closed up along the link.

    Args:
        trajectories: One strand per component, starting at the basepoints
        layout: The link
        sigma: 1-based permutation, strand i ends on circle sigma[i - 1]
        closure: Closure arc choice
        projection_angle: Direction of the u-axis
        basepoint_angles: Per-circle basepoint angles (default: rightmost points)
        reference_angle: Frame in which the word is reported

    Raises:
        StrandCountError: counts of strands, circles and sigma disagree
        ExtractionError: strands do not start at the basepoints, end off
            their target circles, or come closer than the separation margin
        DegenerateProjectionError: every retried angle was degenerate
    """
    closure = closure or ClosureSpec()
    flow_samples = option(None, 'CROSSING_SAMPLES')
    closure_samples = option(closure.samples, 'CLOSURE_SAMPLES')
    retries = option(None, 'PROJECTION_RETRIES')
    workers = option(workers, 'DEFAULT_THREADS')
    bases = basepoints(layout, basepoint_angles)
    _validate(trajectories, layout, sigma, bases, option(None, 'PRESERVATION_TOL'))

    arcs = [
        closure_arc(
            trajectory.end,
            layout.circles[sigma[i] - 1],
            0.0 if basepoint_angles is None else float(basepoint_angles[sigma[i] - 1]),
            closure.orientation,
        )
        for i, trajectory in enumerate(trajectories)
    ]
    loop = ClosedBraid(trajectories, arcs, flow_samples, closure_samples)

    last_error = None
    for attempt in range(max(1, retries)):
        theta = projection_angle + RETRY_OFFSET * attempt
        # Sweep the short way round; a full turn conjugates by the central full twist.
        theta = reference_angle + math.remainder(theta - reference_angle, TWO_PI)
        try:
            conjugator = frame_sweep(bases, reference_angle, theta)
            letters = _read_crossings(loop, theta, workers)
        except DegenerateProjectionError as e:
            last_error = e
            logger.warning(f'Projection angle {theta:.6g} is degenerate ({e}); retrying')
            continue
        word = BraidWord(layout.k, conjugator.letters + tuple(letters) + invert(conjugator).letters)
        word = free_reduce(word)
        logger.debug(f'extract_braid: {len(letters)} crossings at angle {theta:.6g} -> {word}')
        return word
    raise DegenerateProjectionError(f'No generic projection after {max(1, retries)} angles: {last_error}')
