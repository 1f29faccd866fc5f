"""
Exact model of admissible links in the disk and the stability constants they carry.

The disk D is the open unit disk in coordinates. Areas are symplectic areas
normalized so the ambient sphere has total area 1; they are bookkeeping
values declared with the layout and never measured from radii.
"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import List, Optional, Sequence, Tuple

from apps.core.conf import option
from apps.core.numbers import format_rational, parse_rational

from .exceptions import AdmissibilityError, LayoutError

Point = Tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Circle:
    """Round link component with rational center and radius."""

    center: Point
    radius: Fraction

    def center_float(self) -> Tuple[float, float]:
        return float(self.center[0]), float(self.center[1])


@dataclass(frozen=True)
class LinkLayout:
    """k disjoint circles in D with the k+1 region areas of the link complement."""

    k: int
    eta: Fraction
    circles: Tuple[Circle, ...]
    areas: Tuple[Fraction, ...]
    disk_area: Fraction = None

    def __post_init__(self):
        object.__setattr__(self, 'circles', tuple(self.circles))
        object.__setattr__(self, 'areas', tuple(Fraction(a) for a in self.areas))
        object.__setattr__(self, 'eta', Fraction(self.eta))
        if self.disk_area is None:
            object.__setattr__(self, 'disk_area', (sum(self.areas[:-1], Fraction(0)) + 1) / 2)
        else:
            object.__setattr__(self, 'disk_area', Fraction(self.disk_area))
        self._validate()

    def _validate(self):
        if self.k < 1:
            raise LayoutError(f'k must be positive, got {self.k}')
        if self.eta < 0:
            raise LayoutError(f'eta must be nonnegative, got {format_rational(self.eta)}')
        if len(self.circles) != self.k:
            raise LayoutError(f'Expected {self.k} circles, got {len(self.circles)}')
        if len(self.areas) != self.k + 1:
            raise LayoutError(f'Expected {self.k + 1} areas, got {len(self.areas)}')
        if any(a <= 0 for a in self.areas):
            raise LayoutError('All areas must be strictly positive')
        total = sum(self.areas, Fraction(0))
        if total != 1:
            raise LayoutError(f'Areas must sum to 1, got {format_rational(total)}')
        enclosed = sum(self.areas[:-1], Fraction(0))
        if not enclosed < self.disk_area < 1:
            raise LayoutError(
                f'disk_area {format_rational(self.disk_area)} must lie strictly between '
                f'the enclosed area {format_rational(enclosed)} and 1'
            )

        for index, circle in enumerate(self.circles, start=1):
            if circle.radius <= 0:
                raise LayoutError(f'Circle {index} has nonpositive radius')
            cx, cy = circle.center
            # |c| + r < 1 with r < 1, squared exactly
            if circle.radius >= 1 or cx * cx + cy * cy >= (1 - circle.radius) ** 2:
                raise LayoutError(f'Circle {index} is not strictly inside D')

        for i in range(self.k):
            for j in range(i + 1, self.k):
                a, b = self.circles[i], self.circles[j]
                dx = a.center[0] - b.center[0]
                dy = a.center[1] - b.center[1]
                if dx * dx + dy * dy <= (a.radius + b.radius) ** 2:
                    raise LayoutError(f'Circles {i + 1} and {j + 1} intersect')


@dataclass
class AdmissibilityReport:
    admissible: bool
    lambda_: Fraction
    violations: List[str] = field(default_factory=list)
    surjective_setting: bool = False


@dataclass(frozen=True)
class SwapSupport:
    """Rotation disk for exchanging two circles: rigid inside ``inner``, cut off by ``outer``."""

    center: Point
    inner: Fraction
    outer: Fraction


def check_admissible(layout: LinkLayout) -> AdmissibilityReport:
    """
    Check the eta-admissibility conditions.

    The link is admissible when every enclosed disk has the same area lambda
    and lambda equals 2*eta*(k-1) plus the complement area.

    Args:
        layout: Link layout

    Returns:
        AdmissibilityReport; failures are listed, never raised
    """
    k = layout.k
    enclosed = layout.areas[:k]
    complement = layout.areas[k]
    lam = (1 + 2 * layout.eta * (k - 1)) / (k + 1)
    violations = []

    surjective = all(a == enclosed[0] for a in enclosed)
    if not surjective:
        listed = ', '.join(format_rational(a) for a in enclosed)
        violations.append(f'Enclosed areas differ: ({listed})')
    for index, area in enumerate(enclosed, start=1):
        if area != lam:
            violations.append(
                f'Area of disk {index} is {format_rational(area)}, expected lambda = {format_rational(lam)}'
            )
    expected = 2 * layout.eta * (k - 1) + complement
    if surjective and enclosed[0] != expected:
        violations.append(
            f'lambda = {format_rational(enclosed[0])} but 2*eta*(k-1) + A_{k + 1} = {format_rational(expected)}'
        )

    return AdmissibilityReport(
        admissible=not violations,
        lambda_=lam,
        violations=violations,
        surjective_setting=surjective,
    )


def lambda_gap(areas: Sequence) -> Fraction:
    """
    Half the smallest positive integer combination of the areas.

    Brings the areas to a common denominator q; the group they generate is
    (g/q)Z with g the gcd of the numerators.
    """
    values = [parse_rational(a) for a in areas]
    if not values or any(v <= 0 for v in values):
        raise LayoutError('lambda_gap needs positive rational areas')
    q = reduce(lambda acc, v: acc * v.denominator // math.gcd(acc, v.denominator), values, 1)
    g = reduce(math.gcd, (int(v * q) for v in values))
    return Fraction(g, 2 * q)


def stability_threshold(layout: LinkLayout) -> dict:
    """
    epsilon_L = lambda_L / 300 and the Hofer threshold epsilon_L / k.

    Raises:
        AdmissibilityError: the layout is not admissible
    """
    report = check_admissible(layout)
    if not report.admissible:
        raise AdmissibilityError('; '.join(report.violations))
    epsilon_l = lambda_gap(layout.areas) / 300
    return {'epsilon_L': epsilon_l, 'threshold': epsilon_l / layout.k}


def proof_constants(layout: LinkLayout) -> dict:
    """Every constant of the window argument, exactly."""
    lam_l = lambda_gap(layout.areas)
    constants = stability_threshold(layout)
    epsilon = lam_l / 100
    return {
        'lambda_L': lam_l,
        'epsilon': epsilon,
        'epsilon_L': constants['epsilon_L'],
        'threshold': constants['threshold'],
        'continuation_bound': epsilon / (2 * layout.k),
    }


def standard_layout(k: int, eta=0, clearance=None, collar=None) -> LinkLayout:
    """
    k equal circles of area lambda in a row along the x-axis.

    The radius is chosen so that every adjacent pair can be exchanged by a
    rotation whose support avoids the other circles and stays inside D.

    Args:
        k: Number of components
        eta: Nonnegative rational
        clearance: Gap between neighbours as a fraction of the radius
        collar: Width of the boundary collar kept free of support

    Returns:
        LinkLayout passing check_admissible
    """
    eta = parse_rational(eta)
    clearance = parse_rational(option(clearance, 'LAYOUT_CLEARANCE'))
    collar = Fraction(str(option(collar, 'SUPPORT_COLLAR')))
    if k < 1:
        raise LayoutError(f'k must be positive, got {k}')
    if eta < 0:
        raise LayoutError(f'eta must be nonnegative, got {format_rational(eta)}')
    if clearance <= 0:
        raise LayoutError('clearance must be positive')

    lam = (1 + 2 * eta * (k - 1)) / (k + 1)
    if k * lam >= 1:
        raise LayoutError(
            f'lambda = {format_rational(lam)} >= 1/{k}: no room left for the complement'
        )

    # Row span plus the support of the outermost swap must fit inside 1 - collar.
    reach = Fraction(max(k, 2) - 2, 2) * (2 + clearance) + 2 + Fraction(3, 2) * clearance
    radius = (1 - collar) * Fraction(9, 10) / reach
    spacing = (2 + clearance) * radius
    circles = tuple(
        Circle(center=((i - Fraction(k + 1, 2)) * spacing, Fraction(0)), radius=radius)
        for i in range(1, k + 1)
    )
    areas = (lam,) * k + (1 - k * lam,)
    return LinkLayout(
        k=k,
        eta=eta,
        circles=circles,
        areas=areas,
        disk_area=(k * lam + 1) / 2,
    )


def sqrt_bounds(value: Fraction) -> Tuple[Fraction, Fraction]:
    """Rational lower and upper bounds for sqrt(value), exact when value is a square."""
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        root = Fraction(rn, rd)
        return root, root
    approx = Fraction(math.sqrt(value)).limit_denominator(10 ** 12)
    step = Fraction(1, 10 ** 11)
    lower, upper = approx - step, approx + step
    while lower * lower > value:
        lower -= step
    while upper * upper < value:
        upper += step
    return lower, upper


def swap_support(layout: LinkLayout, i: int, j: int, collar=None) -> SwapSupport:
    """
    Rotation disk exchanging circles i and j (1-based).

    Raises:
        LayoutError: no annulus separates the pair from the rest of the link
    """
    collar = Fraction(str(option(collar, 'SUPPORT_COLLAR')))
    if not (1 <= i <= layout.k and 1 <= j <= layout.k and i != j):
        raise LayoutError(f'Invalid circle pair ({i}, {j}) for k = {layout.k}')
    a, b = layout.circles[i - 1], layout.circles[j - 1]
    center = ((a.center[0] + b.center[0]) / 2, (a.center[1] + b.center[1]) / 2)
    half_sq = ((a.center[0] - b.center[0]) ** 2 + (a.center[1] - b.center[1]) ** 2) / 4
    inner = sqrt_bounds(half_sq)[1] + max(a.radius, b.radius)

    origin_lower, origin_upper = sqrt_bounds(center[0] ** 2 + center[1] ** 2)
    outer = 1 - collar - origin_upper
    for index, circle in enumerate(layout.circles, start=1):
        if index in (i, j):
            continue
        dist_sq = (circle.center[0] - center[0]) ** 2 + (circle.center[1] - center[1]) ** 2
        outer = min(outer, sqrt_bounds(dist_sq)[0] - circle.radius)

    if outer <= inner:
        raise LayoutError(
            f'No room to exchange circles {i} and {j}: support would need '
            f'{float(inner):.6g} < r < {float(outer):.6g}'
        )
    return SwapSupport(center=center, inner=inner, outer=outer)


def link_hull_radius(layout: LinkLayout) -> Fraction:
    """Upper bound on the radius of the origin-centred disk containing the link."""
    return max(
        sqrt_bounds(c.center[0] ** 2 + c.center[1] ** 2)[1] + c.radius
        for c in layout.circles
    )


def basepoints(layout: LinkLayout, angles: Optional[Sequence[float]] = None) -> List[Tuple[float, float]]:
    """Strand basepoints on each circle; the rightmost point unless angles are given."""
    points = []
    for index, circle in enumerate(layout.circles):
        theta = 0.0 if angles is None else float(angles[index])
        cx, cy = circle.center_float()
        r = float(circle.radius)
        points.append((cx + r * math.cos(theta), cy + r * math.sin(theta)))
    return points
