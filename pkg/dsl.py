"""Text form of Wirtinger expressions.

Grammar::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | base ('^' ['-'|'+'] integer)?
    base   := number | I1 | I2 | J | z1 | z2 | cz1 | cz2 | x | y | p | q
            | func '(' expr ')' | '(' expr ')'

``cz1`` and ``cz2`` stand for the conjugate variables. ``x, y, p, q`` expand
to the real coordinates written through z1, cz1, z2, cz2. A unary minus in
front of a bare number folds into a negative constant; everywhere else it
builds a ``Neg`` node. Arithmetic on constants alone folds into one
constant, so ``(1.0 + 2.0*I1)`` reads back as the ``Const`` it was printed
from. Otherwise the parser builds raw nodes (no pruning) and
``parse_expr(format_expr(e)) == e`` for every tree the parser produces.
"""

from __future__ import annotations

import logging
import math
import operator
import re
from dataclasses import dataclass
from typing import List

import numpy as np

from bicomplex import UNITS, Bicomplex, format_bicomplex
from errors import DslSyntaxError, NullConeError, UnknownIdentifier
from expressions import (
    FUNCTIONS,
    VARIABLES,
    Add,
    Const,
    Div,
    Expr,
    Func,
    Mul,
    Neg,
    P,
    Pow,
    Q,
    Sub,
    Var,
    X,
    Y,
)

logger = logging.getLogger("bvk.dsl")

_TOKEN = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<number>\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()])"
)

_SUGAR = {"x": X, "y": Y, "p": P, "q": Q}


@dataclass(frozen=True)
class Token:
    kind: str  # number | ident | op | end
    text: str
    offset: int


def tokenize(src: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if m is None:
            raise DslSyntaxError(f"unexpected character {src[pos]!r}", pos)
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    tokens.append(Token("end", "", len(src)))
    return tokens


_FOLDABLE = {Add: operator.add, Sub: operator.sub, Mul: operator.mul, Div: operator.truediv}


def _fold(node: Expr) -> Expr:
    """Collapse arithmetic whose operands are all constants into one ``Const``.

    Folding is skipped when the result is undefined (a zero divisor in a
    denominator) or not finite; evaluation then reports the problem.
    """
    try:
        if type(node) in _FOLDABLE and isinstance(node.left, Const) and isinstance(node.right, Const):
            value = _FOLDABLE[type(node)](node.left.value, node.right.value)
        elif isinstance(node, Neg) and isinstance(node.arg, Const):
            value = -node.arg.value
        elif isinstance(node, Pow) and isinstance(node.base, Const):
            value = node.base.value ** node.exponent
        else:
            return node
    except NullConeError:
        return node
    if not all(np.isfinite(float(c)) for c in value.components()):
        return node
    return Const(value)


class _Parser:
    def __init__(self, src: str) -> None:
        self.tokens = tokenize(src)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def _advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def _at(self, text: str) -> bool:
        tok = self.current
        return tok.kind == "op" and tok.text == text

    def _expect(self, text: str) -> Token:
        if not self._at(text):
            raise DslSyntaxError(f"expected {text!r}", self.current.offset)
        return self._advance()

    def parse(self) -> Expr:
        e = self.expr()
        if self.current.kind != "end":
            raise DslSyntaxError(f"unexpected {self.current.text!r}", self.current.offset)
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self._at("+") or self._at("-"):
            op = self._advance().text
            right = self.term()
            left = _fold(Add(left, right) if op == "+" else Sub(left, right))
        return left

    def term(self) -> Expr:
        left = self.factor()
        while self._at("*") or self._at("/"):
            op = self._advance().text
            right = self.factor()
            left = _fold(Mul(left, right) if op == "*" else Div(left, right))
        return left

    def factor(self) -> Expr:
        if self._at("-"):
            self._advance()
            if self.current.kind == "number" and not self._power_follows():
                return Const(Bicomplex(-float(self._advance().text)))
            return _fold(Neg(self.factor()))
        base = self.base()
        if self._at("^"):
            self._advance()
            return _fold(Pow(base, self._integer()))
        return base

    def _power_follows(self) -> bool:
        nxt = self.tokens[self.pos + 1]
        return nxt.kind == "op" and nxt.text == "^"

    def _integer(self) -> int:
        sign = 1
        if self._at("-") or self._at("+"):
            sign = -1 if self._advance().text == "-" else 1
        tok = self.current
        if tok.kind != "number" or not tok.text.isdigit():
            raise DslSyntaxError("expected an integer exponent", tok.offset)
        self._advance()
        return sign * int(tok.text)

    def base(self) -> Expr:
        tok = self.current
        if tok.kind == "number":
            self._advance()
            return Const(Bicomplex(float(tok.text)))
        if tok.kind == "ident":
            return self._identifier()
        if self._at("("):
            self._advance()
            inner = self.expr()
            self._expect(")")
            return inner
        if tok.kind == "end":
            raise DslSyntaxError("unexpected end of input", tok.offset)
        raise DslSyntaxError(f"unexpected {tok.text!r}", tok.offset)

    def _identifier(self) -> Expr:
        tok = self._advance()
        name = tok.text
        if name in UNITS:
            return Const(UNITS[name])
        if name in VARIABLES:
            return Var(name)
        if name in _SUGAR:
            return _SUGAR[name]
        if name in FUNCTIONS:
            self._expect("(")
            arg = self.expr()
            self._expect(")")
            return Func(name, arg)
        raise UnknownIdentifier(name, tok.offset)


def parse_expr(src: str) -> Expr:
    """Parse DSL text into an expression tree."""
    return _Parser(src).parse()


# ----------------------------------------------------------------------
# Printing
# ----------------------------------------------------------------------
_ADD, _MUL, _NEG, _POW, _ATOM = 1, 2, 3, 4, 5


def _precedence(e: Expr) -> int:
    if isinstance(e, (Add, Sub)):
        return _ADD
    if isinstance(e, (Mul, Div)):
        return _MUL
    if isinstance(e, Neg):
        return _NEG
    if isinstance(e, Pow):
        return _POW
    return _ATOM


def _format_const(value: Bicomplex) -> str:
    if not value.is_scalar:
        raise ValueError("array-valued constants have no text form")
    for name, unit in UNITS.items():
        if value == unit:
            return name
    if float(value.w1) == 0.0 and float(value.w2) == 0.0 and float(value.w3) == 0.0:
        real = float(value.w0)
        if not math.isfinite(real):
            raise ValueError(f"constant {real!r} has no text form")
        return f"({real!r})" if math.copysign(1.0, real) < 0 else repr(real)
    return f"({format_bicomplex(value)})"


def _wrap(e: Expr, floor: int) -> str:
    text = format_expr(e)
    return f"({text})" if _precedence(e) < floor else text


def format_expr(e: Expr) -> str:
    if isinstance(e, Const):
        return _format_const(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Func):
        return f"{e.name}({format_expr(e.arg)})"
    if isinstance(e, Pow):
        return f"{_wrap(e.base, _ATOM)}^{e.exponent}"
    if isinstance(e, Neg):
        if isinstance(e.arg, Const):
            return f"-({format_expr(e.arg)})"
        return f"-{_wrap(e.arg, _NEG)}"
    if isinstance(e, (Add, Sub, Mul, Div)):
        symbol = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(e)]
        level = _precedence(e)
        return f"{_wrap(e.left, level)} {symbol} {_wrap(e.right, level + 1)}"
    raise TypeError(f"cannot format {type(e).__name__}")
