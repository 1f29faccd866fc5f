"""
DRF fields shared by the JSON formats of every app.
"""
from fractions import Fraction

from rest_framework import serializers

from .numbers import InexactNumberError, format_rational, format_real, parse_rational


class RationalField(serializers.Field):
    """Exact rational stored as a "p/q" string."""

    default_error_messages = {
        'inexact': '{message}',
    }

    def __init__(self, *args, positive=False, nonnegative=False, **kwargs):
        self.positive = positive
        self.nonnegative = nonnegative
        super().__init__(*args, **kwargs)

    def to_internal_value(self, data) -> Fraction:
        try:
            value = parse_rational(data)
        except InexactNumberError as exc:
            self.fail('inexact', message=str(exc))
        if self.positive and value <= 0:
            raise serializers.ValidationError(f'Must be positive, got {format_rational(value)}')
        if self.nonnegative and value < 0:
            raise serializers.ValidationError(f'Must be nonnegative, got {format_rational(value)}')
        return value

    def to_representation(self, value) -> str:
        return format_rational(value)


class RealField(serializers.Field):
    """Float written as a fixed-precision decimal string."""

    def to_internal_value(self, data) -> float:
        try:
            return float(data)
        except (TypeError, ValueError):
            raise serializers.ValidationError(f'Not a real number: {data!r}')

    def to_representation(self, value) -> str:
        return format_real(value)


class PointField(serializers.ListField):
    """Pair of exact rationals."""

    def __init__(self, **kwargs):
        kwargs.setdefault('child', RationalField())
        kwargs.setdefault('min_length', 2)
        kwargs.setdefault('max_length', 2)
        super().__init__(**kwargs)

    def to_internal_value(self, data):
        return tuple(super().to_internal_value(data))
