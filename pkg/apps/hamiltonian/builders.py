"""
Builder library of compactly supported, link-preserving Hamiltonians.

All builders return HamiltonianExpr trees whose rendering parses back to the
same tree, so generated Hamiltonians can be stored as DSL text in configs.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Tuple, Union

from scipy.integrate import quad

from apps.core.conf import option
from apps.geometry.layout import Circle, LinkLayout, sqrt_bounds, swap_support

from .dual import bump_value
from .exceptions import SupportError
from .expressions import BinOp, Bump, Call, Const, HamiltonianExpr, Node, Pow, Var

Real = Union[Fraction, int, float]


@dataclass(frozen=True)
class BumpSite:
    """Centre and radii of a plateau bump: 1 inside ``inner``, 0 outside ``outer``."""

    center: Tuple[Fraction, Fraction]
    inner: Fraction
    outer: Fraction


def exact(value: Real) -> Fraction:
    """Exact rational for a builder parameter; floats keep their shortest repr."""
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f'Non-finite parameter {value!r}')
        return Fraction(repr(value))
    return Fraction(value)


def number(value: Real) -> Node:
    """Constant node that renders as DSL text parsing back to itself."""
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f'Non-finite constant {value!r}')
        if value < 0:
            return Call('neg', number(-value))
        return Const(Fraction(repr(value)), text=repr(value))
    value = Fraction(value)
    if value < 0:
        return Call('neg', number(-value))
    if value.denominator == 1:
        return Const(value)
    return BinOp('/', Const(Fraction(value.numerator)), Const(Fraction(value.denominator)))


def squared_distance(center: Tuple[Real, Real], variables=('x', 'y')) -> Node:
    """(x - cx)^2 + (y - cy)^2, dropping zero offsets."""
    terms = []
    for name, offset in zip(variables, center):
        offset = exact(offset)
        base = Var(name) if offset == 0 else BinOp('-', Var(name), number(offset))
        terms.append(Pow(base, 2))
    node = terms[0]
    for term in terms[1:]:
        node = BinOp('+', node, term)
    return node


def _support_radius(center, outer: Fraction) -> float:
    return float(sqrt_bounds(exact(center[0]) ** 2 + exact(center[1]) ** 2)[1] + outer)


def _check_disk(center, inner: Fraction, outer: Fraction, collar) -> None:
    collar = Fraction(str(option(collar, 'SUPPORT_COLLAR')))
    if not 0 <= inner < outer:
        raise SupportError(f'Support radii must satisfy 0 <= inner < outer, got {inner} and {outer}')
    room = 1 - collar - outer
    if room < 0 or exact(center[0]) ** 2 + exact(center[1]) ** 2 > room * room:
        raise SupportError(
            f'Support disk of radius {float(outer):.6g} about {tuple(map(float, center))} '
            f'leaves D minus a collar of width {float(collar)}'
        )


def rotation(
    center: Tuple[Real, Real],
    inner_radius: Real,
    outer_radius: Real,
    angle: Real = math.pi,
    angular_profile: Optional[HamiltonianExpr] = None,
    collar=None,
) -> HamiltonianExpr:
    """
    H = g(|z - c|^2) generating a rigid rotation by ``angle`` over unit time
    on the disk of radius ``inner_radius``, cut off smoothly at ``outer_radius``.

    With s = |z - c|^2 and g(s) = -(angle/2)(s - b) bump(s, a, b), g' = -angle/2 on
    the plateau, which is counterclockwise rotation at angular speed ``angle``.
    An angular profile multiplies g and must integrate to 1 over [0, 1].

    Raises:
        SupportError: the support disk does not fit inside D minus the collar
    """
    inner, outer = exact(inner_radius), exact(outer_radius)
    _check_disk(center, inner, outer, collar)
    a, b = inner * inner, outer * outer
    s = squared_distance(center)
    coefficient = -angle / 2 if isinstance(angle, float) else -exact(angle) / 2
    root = BinOp('*', BinOp('*', number(coefficient), BinOp('-', s, number(b))), Bump(s, a, b))
    if angular_profile is not None:
        root = BinOp('*', angular_profile.root, root)
    return HamiltonianExpr(root, support_radius=_support_radius(center, outer))


def swap_pair(
    c1: Circle,
    c2: Circle,
    inner_radius: Real,
    outer_radius: Real,
    sign: int = 1,
    angular_profile: Optional[HamiltonianExpr] = None,
) -> HamiltonianExpr:
    """Half-turn about the midpoint of two circles; sign +1 is counterclockwise."""
    if sign not in (1, -1):
        raise ValueError(f'sign must be +1 or -1, got {sign}')
    center = ((c1.center[0] + c2.center[0]) / 2, (c1.center[1] + c2.center[1]) / 2)
    return rotation(center, inner_radius, outer_radius, sign * math.pi, angular_profile)


def adjacent_swap(
    layout: LinkLayout, i: int, sign: int = 1, angular_profile: Optional[HamiltonianExpr] = None,
) -> HamiltonianExpr:
    """swap_pair for circles i and i + 1 (1-based) of a layout, radii from swap_support."""
    support = swap_support(layout, i, i + 1)
    return swap_pair(
        layout.circles[i - 1], layout.circles[i], support.inner, support.outer, sign, angular_profile,
    )


def _combined_support(*hamiltonians: HamiltonianExpr) -> Optional[float]:
    radii = [H.support_radius for H in hamiltonians]
    if any(r is None for r in radii):
        return None
    return max(radii)


def scaled(H: HamiltonianExpr, c: Real) -> HamiltonianExpr:
    if c == 0:
        return HamiltonianExpr(Const(Fraction(0)), support_radius=0.0)
    return HamiltonianExpr(BinOp('*', number(c), H.root), support_radius=H.support_radius)


def sum_of(H1: HamiltonianExpr, H2: HamiltonianExpr) -> HamiltonianExpr:
    return HamiltonianExpr(BinOp('+', H1.root, H2.root), support_radius=_combined_support(H1, H2))


def difference(H1: HamiltonianExpr, H2: HamiltonianExpr) -> HamiltonianExpr:
    return HamiltonianExpr(BinOp('-', H1.root, H2.root), support_radius=_combined_support(H1, H2))


def product(H1: HamiltonianExpr, H2: HamiltonianExpr) -> HamiltonianExpr:
    """Pointwise product; a time-only factor keeps the spatial support of the other."""
    radii = [H.support_radius for H in (H1, H2) if H.support_radius is not None]
    return HamiltonianExpr(BinOp('*', H1.root, H2.root), support_radius=min(radii) if radii else None)


def plateau_bump(site: BumpSite, collar=None) -> HamiltonianExpr:
    """bump(|z - p|^2, inner^2, outer^2): identically 1 on the plateau disk."""
    inner, outer = exact(site.inner), exact(site.outer)
    _check_disk(site.center, inner, outer, collar)
    root = Bump(squared_distance(site.center), inner * inner, outer * outer)
    return HamiltonianExpr(root, support_radius=_support_radius(site.center, outer))


def perturbation(H: HamiltonianExpr, delta: Real, site: BumpSite) -> HamiltonianExpr:
    """H + delta * plateau_bump(site)."""
    return sum_of(H, scaled(plateau_bump(site), delta))


def time_window(center: Real, half_width: Real) -> HamiltonianExpr:
    """
    Smooth time cutoff bump((t - c)^2, (w/2)^2, w^2): 1 for |t - c| <= w/2, 0 for |t - c| >= w.
    """
    c, w = exact(center), exact(half_width)
    if w <= 0:
        raise ValueError(f'half_width must be positive, got {w}')
    offset = Var('t') if c == 0 else BinOp('-', Var('t'), number(c))
    return HamiltonianExpr(Bump(Pow(offset, 2), w * w / 4, w * w), support_radius=None)


@lru_cache(maxsize=None)
def _unit_window_integral() -> float:
    """Integral of bump(u^2, 1/4, 1) over [-1, 1]."""
    value, _ = quad(
        lambda u: float(bump_value(u * u, 0.25, 1.0)), -1.0, 1.0,
        points=(-0.5, 0.5), epsabs=1e-12, epsrel=1e-12, limit=200,
    )
    return value


def concatenate(parts: Sequence[HamiltonianExpr]) -> HamiltonianExpr:
    """
    Run autonomous Hamiltonians one after another in [0, 1].

    Part j is switched on by a time window on [j/m, (j+1)/m] normalised to
    unit integral, so the time-1 map is the composition of the parts'
    time-1 maps in order.
    """
    if not parts:
        return HamiltonianExpr(Const(Fraction(0)), support_radius=0.0)
    m = len(parts)
    half_width = Fraction(1, 2 * m)
    amplitude = 1.0 / (float(half_width) * _unit_window_integral())
    total = None
    for j, part in enumerate(parts):
        window = scaled(time_window(Fraction(2 * j + 1, 2 * m), half_width), amplitude)
        term = product(window, part)
        total = term if total is None else sum_of(total, term)
    return total
