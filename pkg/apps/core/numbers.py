"""
Exact rational parsing/formatting and fixed-precision real formatting.
"""
from fractions import Fraction
from typing import Union

from django.conf import settings

from .exceptions import BraidflowError

Rational = Union[Fraction, int]


class InexactNumberError(BraidflowError):
    """A value that must be an exact rational arrived as a float or garbage."""


def parse_rational(value) -> Fraction:
    """
    Parse an exact rational.

    Accepts ints, Fractions and strings such as "p/q", "3" or "0.25".
    Floats are rejected: they cannot carry an exact area.
    """
    if isinstance(value, bool):
        raise InexactNumberError(f'Not a rational: {value!r}')
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise InexactNumberError(
            f'Inexact value {value!r}: write rationals as "p/q" strings'
        )
    if isinstance(value, str):
        text = value.strip()
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise InexactNumberError(f'Not a rational: {value!r}') from exc
    raise InexactNumberError(f'Not a rational: {value!r}')


def format_rational(value: Rational) -> str:
    """Render as "p/q" (integers as "p")."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f'{value.numerator}/{value.denominator}'


def format_real(value: float, digits: int = None) -> str:
    """Render a float with a fixed number of significant digits."""
    if digits is None:
        digits = settings.BRAIDFLOW_CONFIG['DECIMAL_DIGITS']
    return format(float(value), f'.{digits}g')
