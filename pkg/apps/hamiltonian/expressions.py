"""
Expression tree for time-dependent Hamiltonians H(t, x, y).

Nodes evaluate over floats, numpy arrays or Dual numbers. ``str(node)``
renders canonical DSL text that parses back to an equal tree.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from apps.core.numbers import format_rational

from . import dual
from .exceptions import EvaluationError

VARIABLES = ('t', 'x', 'y')
UNARY_FUNCTIONS = ('sin', 'cos', 'exp', 'neg')


class Node:
    """Base class of all expression nodes."""

    def evaluate(self, env: dict):
        raise NotImplementedError

    def is_constant(self) -> bool:
        return False

    def exact_value(self) -> Fraction:
        raise TypeError(f'{self} is not a constant expression')


def rational_text(value: Fraction) -> str:
    """DSL text for an exact constant, e.g. "4/5" or "neg(1/2)"."""
    value = Fraction(value)
    if value < 0:
        return f'neg({format_rational(-value)})'
    return format_rational(value)


@dataclass(frozen=True)
class Const(Node):
    value: Fraction
    text: Optional[str] = field(default=None, compare=False)
    offset: int = field(default=-1, compare=False)

    def evaluate(self, env):
        return float(self.value)

    def is_constant(self):
        return True

    def exact_value(self):
        return self.value

    def __str__(self):
        if self.text is not None:
            return self.text
        return rational_text(self.value)


@dataclass(frozen=True)
class Var(Node):
    name: str
    offset: int = field(default=-1, compare=False)

    def evaluate(self, env):
        return env[self.name]

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node
    offset: int = field(default=-1, compare=False)

    def evaluate(self, env):
        lhs = self.left.evaluate(env)
        rhs = self.right.evaluate(env)
        if self.op == '+':
            return lhs + rhs
        if self.op == '-':
            return lhs - rhs
        if self.op == '*':
            return lhs * rhs
        if np.any(np.asarray(dual.real_part(rhs)) == 0):
            raise EvaluationError('Division by zero', self.right.offset, str(self))
        return lhs / rhs

    def is_constant(self):
        return self.left.is_constant() and self.right.is_constant()

    def exact_value(self):
        lhs, rhs = self.left.exact_value(), self.right.exact_value()
        if self.op == '+':
            return lhs + rhs
        if self.op == '-':
            return lhs - rhs
        if self.op == '*':
            return lhs * rhs
        if rhs == 0:
            raise EvaluationError('Division by zero', self.right.offset, str(self))
        return lhs / rhs

    def __str__(self):
        return f'({self.left} {self.op} {self.right})'


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: int
    offset: int = field(default=-1, compare=False)

    def evaluate(self, env):
        value = self.base.evaluate(env)
        if self.exponent == 0 and not isinstance(value, dual.Dual):
            return np.ones_like(value) if isinstance(value, np.ndarray) else 1.0
        return value ** self.exponent

    def is_constant(self):
        return self.base.is_constant()

    def exact_value(self):
        return self.base.exact_value() ** self.exponent

    def __str__(self):
        return f'{_atom(self.base)}^{self.exponent}'


@dataclass(frozen=True)
class Call(Node):
    func: str
    arg: Node
    offset: int = field(default=-1, compare=False)

    def evaluate(self, env):
        value = self.arg.evaluate(env)
        if self.func == 'neg':
            return -value
        return getattr(dual, self.func)(value)

    def is_constant(self):
        return self.func == 'neg' and self.arg.is_constant()

    def exact_value(self):
        if self.func != 'neg':
            raise TypeError(f'{self.func} of a constant is not exact')
        return -self.arg.exact_value()

    def __str__(self):
        return f'{self.func}({self.arg})'


@dataclass(frozen=True)
class Bump(Node):
    """Smooth cutoff: 1 for arg <= a, 0 for arg >= b."""

    arg: Node
    a: Fraction
    b: Fraction
    offset: int = field(default=-1, compare=False)

    def evaluate(self, env):
        return dual.bump(self.arg.evaluate(env), float(self.a), float(self.b))

    def __str__(self):
        return f'bump({self.arg}, {rational_text(self.a)}, {rational_text(self.b)})'


def _atom(node: Node) -> str:
    text = str(node)
    if isinstance(node, (Var, BinOp, Call, Bump)):
        return text
    if isinstance(node, Const) and text.replace('.', '', 1).isdigit():
        return text
    return f'({text})'


@dataclass(frozen=True)
class HamiltonianExpr:
    """Parsed Hamiltonian with an optional declared support radius."""

    root: Node
    support_radius: Optional[float] = field(default=None, compare=False)

    @property
    def text(self) -> str:
        return str(self.root)

    def __str__(self):
        return self.text
