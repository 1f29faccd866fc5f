"""
Forward-mode dual numbers carrying the gradient in (x, y).

Components may be floats or numpy arrays, so one pass differentiates a whole
batch of points.
"""
import numpy as np


class Dual:
    """Value with partial derivatives along x and y."""

    __slots__ = ('real', 'dx', 'dy')
    # numpy operands defer to the reflected Dual operators
    __array_ufunc__ = None

    def __init__(self, real, dx=0.0, dy=0.0):
        self.real = real
        self.dx = dx
        self.dy = dy

    def __repr__(self):
        return f'Dual({self.real!r}, dx={self.dx!r}, dy={self.dy!r})'

    @staticmethod
    def lift(value) -> 'Dual':
        if isinstance(value, Dual):
            return value
        return Dual(value, 0.0, 0.0)

    def __add__(self, other):
        other = Dual.lift(other)
        return Dual(self.real + other.real, self.dx + other.dx, self.dy + other.dy)

    __radd__ = __add__

    def __sub__(self, other):
        other = Dual.lift(other)
        return Dual(self.real - other.real, self.dx - other.dx, self.dy - other.dy)

    def __rsub__(self, other):
        return Dual.lift(other) - self

    def __mul__(self, other):
        other = Dual.lift(other)
        return Dual(
            self.real * other.real,
            self.dx * other.real + self.real * other.dx,
            self.dy * other.real + self.real * other.dy,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Dual.lift(other)
        quotient = self.real / other.real
        return Dual(
            quotient,
            (self.dx - quotient * other.dx) / other.real,
            (self.dy - quotient * other.dy) / other.real,
        )

    def __rtruediv__(self, other):
        return Dual.lift(other) / self

    def __neg__(self):
        return Dual(-self.real, -self.dx, -self.dy)

    def __pow__(self, exponent: int):
        if exponent == 0:
            return Dual(np.ones_like(self.real) if isinstance(self.real, np.ndarray) else 1.0)
        scale = exponent * self.real ** (exponent - 1)
        return Dual(self.real ** exponent, scale * self.dx, scale * self.dy)

    def _chain(self, value, derivative):
        return Dual(value, derivative * self.dx, derivative * self.dy)

    def sin(self):
        return self._chain(np.sin(self.real), np.cos(self.real))

    def cos(self):
        return self._chain(np.cos(self.real), -np.sin(self.real))

    def exp(self):
        value = np.exp(self.real)
        return self._chain(value, value)

    def bump(self, a: float, b: float):
        return self._chain(bump_value(self.real, a, b), bump_derivative(self.real, a, b))


def _mollifier(v):
    """m(v) = exp(-1/v) for v > 0, else 0, with its derivative m(v)/v^2."""
    v = np.asarray(v, dtype=float)
    positive = v > 0
    safe = np.where(positive, v, 1.0)
    m = np.where(positive, np.exp(-1.0 / safe), 0.0)
    dm = np.where(positive, m / (safe * safe), 0.0)
    return m, dm


def bump_value(s, a: float, b: float):
    """1 for s <= a, 0 for s >= b, smooth and strictly decreasing in between."""
    width = b - a
    w = (np.asarray(s, dtype=float) - a) / width
    mp, _ = _mollifier(1.0 - w)
    mw, _ = _mollifier(w)
    return mp / (mp + mw)


def bump_derivative(s, a: float, b: float):
    width = b - a
    w = (np.asarray(s, dtype=float) - a) / width
    mp, dmp = _mollifier(1.0 - w)
    mw, dmw = _mollifier(w)
    den = mp + mw
    return -(dmp * mw + mp * dmw) / (width * den * den)


def sin(v):
    return v.sin() if isinstance(v, Dual) else np.sin(v)


def cos(v):
    return v.cos() if isinstance(v, Dual) else np.cos(v)


def exp(v):
    return v.exp() if isinstance(v, Dual) else np.exp(v)


def bump(v, a: float, b: float):
    return v.bump(a, b) if isinstance(v, Dual) else bump_value(v, a, b)


def real_part(v):
    return v.real if isinstance(v, Dual) else v
