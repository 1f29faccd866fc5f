"""
Recursive-descent parser for the Hamiltonian DSL.

    Expr   := Term (('+' | '-') Term)*
    Term   := Factor (('*' | '/') Factor)*
    Factor := Base ('^' UInt)?
    Base   := Number | 't' | 'x' | 'y' | Func '(' Args ')' | '(' Expr ')'
    Func   := sin | cos | exp | neg | bump

bump(arg, a, b) takes constant rational bounds a < b.
"""
import re
from fractions import Fraction
from typing import List, NamedTuple

from .exceptions import EvaluationError, ParseError
from .expressions import (
    UNARY_FUNCTIONS, VARIABLES, BinOp, Bump, Call, Const, HamiltonianExpr, Node, Pow, Var,
)

GRAMMAR_HELP = __doc__.strip()

_TOKEN = re.compile(
    r'\s*(?:'
    r'(?P<number>\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)'
    r'|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)'
    r'|(?P<op>[-+*/^(),])'
    r'|(?P<bad>\S)'
    r')'
)

_BASE_START = {'number', '(', *VARIABLES, *UNARY_FUNCTIONS, 'bump'}


class Token(NamedTuple):
    kind: str
    text: str
    offset: int


def tokenize(text: str) -> List[Token]:
    tokens = []
    position = 0
    while True:
        match = _TOKEN.match(text, position)
        if match is None:
            break
        kind = match.lastgroup
        start = match.start(kind)
        offset = len(text[:start].encode('utf-8'))
        value = match.group(kind)
        if kind == 'bad':
            raise ParseError(f'Unexpected character {value!r}', offset, _BASE_START)
        tokens.append(Token(value if kind == 'op' else kind, value, offset))
        position = match.end()
    tokens.append(Token('end', '', len(text.encode('utf-8'))))
    return tokens


class Parser:
    """One-shot parser over a token list."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect(self, kind: str) -> Token:
        if self.current.kind != kind:
            raise ParseError(self._describe(self.current), self.current.offset, {kind})
        return self.advance()

    @staticmethod
    def _describe(token: Token) -> str:
        if token.kind == 'end':
            return 'Unexpected end of input'
        return f'Unexpected {token.text!r}'

    def parse(self) -> Node:
        node = self.expr()
        if self.current.kind != 'end':
            raise ParseError(
                self._describe(self.current), self.current.offset,
                {'+', '-', '*', '/', '^', 'end of input'},
            )
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.current.kind in ('+', '-'):
            op = self.advance()
            node = BinOp(op.kind, node, self.term(), offset=op.offset)
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.current.kind in ('*', '/'):
            op = self.advance()
            node = BinOp(op.kind, node, self.factor(), offset=op.offset)
        return node

    def factor(self) -> Node:
        node = self.base()
        if self.current.kind == '^':
            caret = self.advance()
            exponent = self.current
            if exponent.kind != 'number' or not exponent.text.isdigit():
                raise ParseError('Exponent must be a nonnegative integer', exponent.offset, {'integer'})
            self.advance()
            node = Pow(node, int(exponent.text), offset=caret.offset)
        return node

    def base(self) -> Node:
        token = self.current
        if token.kind == 'number':
            self.advance()
            return Const(Fraction(token.text), text=token.text, offset=token.offset)
        if token.kind == '(':
            self.advance()
            node = self.expr()
            self.expect(')')
            return node
        if token.kind == 'ident':
            self.advance()
            if token.text in VARIABLES:
                return Var(token.text, offset=token.offset)
            if token.text in UNARY_FUNCTIONS or token.text == 'bump':
                return self.call(token)
            raise ParseError(f'Unknown identifier {token.text!r}', token.offset, _BASE_START)
        raise ParseError(self._describe(token), token.offset, _BASE_START)

    def call(self, name: Token) -> Node:
        self.expect('(')
        args = [self.expr()]
        while self.current.kind == ',':
            self.advance()
            args.append(self.expr())
        self.expect(')')

        arity = 3 if name.text == 'bump' else 1
        if len(args) != arity:
            raise ParseError(
                f'{name.text} takes {arity} argument(s), got {len(args)}', name.offset,
            )
        if name.text != 'bump':
            return Call(name.text, args[0], offset=name.offset)

        bounds = []
        for arg in args[1:]:
            if not arg.is_constant():
                raise ParseError('bump bounds must be constant rationals', arg.offset)
            try:
                bounds.append(arg.exact_value())
            except EvaluationError as exc:
                raise ParseError(str(exc), arg.offset) from exc
        a, b = bounds
        if not a < b:
            raise ParseError(f'bump needs a < b, got {a} >= {b}', name.offset)
        return Bump(args[0], a, b, offset=name.offset)


def parse(text: str) -> HamiltonianExpr:
    """
    Parse DSL text into a HamiltonianExpr.

    Raises:
        ParseError: syntax error (byte offset and expected tokens), unknown
            identifier, wrong arity or invalid bump bounds
    """
    return HamiltonianExpr(Parser(text).parse())
