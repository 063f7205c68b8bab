"""Expression trees in the Wirtinger variables z1, z2, cz1, cz2.

The four variables are independent symbols for differentiation; at
evaluation time ``czk`` receives the complex conjugate of ``zk``. Constants
are bicomplex. There is no simplification beyond pruning zeros and ones and
folding constant-only subtrees, so equality of two different trees is always
decided numerically on a grid.

Trees are immutable and share subtrees freely; the recursive walkers below
memoize on node identity so shared subtrees are visited once.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import singledispatch
from typing import Callable, Dict, Iterator, Mapping

import numpy as np

from bicomplex import (
    COMPLEMENT,
    ELEMENTARY,
    I1,
    I2,
    Axis,
    Bicomplex,
    Conjugation,
)
from errors import EvaluationError, NullConeError

logger = logging.getLogger("bvk.expressions")

VARIABLES = ("z1", "z2", "cz1", "cz2")
FUNCTIONS = ("exp", "sin", "cos", "sinh", "cosh")

# dagger_1 and dagger_3 act as complex conjugation on C(i1).
_SWAP = {"z1": "cz1", "cz1": "z1", "z2": "cz2", "cz2": "z2"}


class Expr:
    """Base node. Arithmetic operators build pruned trees."""

    def __add__(self, other: object) -> Expr:
        return add(self, _coerce(other))

    def __radd__(self, other: object) -> Expr:
        return add(_coerce(other), self)

    def __sub__(self, other: object) -> Expr:
        return sub(self, _coerce(other))

    def __rsub__(self, other: object) -> Expr:
        return sub(_coerce(other), self)

    def __mul__(self, other: object) -> Expr:
        return mul(self, _coerce(other))

    def __rmul__(self, other: object) -> Expr:
        return mul(_coerce(other), self)

    def __truediv__(self, other: object) -> Expr:
        return div(self, _coerce(other))

    def __rtruediv__(self, other: object) -> Expr:
        return div(_coerce(other), self)

    def __neg__(self) -> Expr:
        return neg(self)

    def __pow__(self, n: int) -> Expr:
        return power(self, n)

    def children(self) -> tuple:
        return ()


@dataclass(frozen=True, eq=True, repr=False)
class Const(Expr):
    value: Bicomplex

    def __repr__(self) -> str:
        return f"Const({self.value})"


@dataclass(frozen=True, eq=True, repr=False)
class Var(Expr):
    name: str

    def __repr__(self) -> str:
        return f"Var({self.name})"


@dataclass(frozen=True, eq=True)
class Neg(Expr):
    arg: Expr

    def children(self) -> tuple:
        return (self.arg,)


@dataclass(frozen=True, eq=True)
class Add(Expr):
    left: Expr
    right: Expr

    def children(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class Sub(Expr):
    left: Expr
    right: Expr

    def children(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class Mul(Expr):
    left: Expr
    right: Expr

    def children(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class Div(Expr):
    left: Expr
    right: Expr

    def children(self) -> tuple:
        return (self.left, self.right)


@dataclass(frozen=True, eq=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def children(self) -> tuple:
        return (self.base,)


@dataclass(frozen=True, eq=True)
class Func(Expr):
    name: str
    arg: Expr

    def children(self) -> tuple:
        return (self.arg,)


# ----------------------------------------------------------------------
# Constructors
# ----------------------------------------------------------------------

def const(value: object) -> Const:
    return Const(Bicomplex.coerce(value))


def _coerce(value: object) -> Expr:
    if isinstance(value, Expr):
        return value
    return const(value)


ZERO = const(0.0)
ONE = const(1.0)
HALF = const(0.5)
Z1 = Var("z1")
Z2 = Var("z2")
CZ1 = Var("cz1")
CZ2 = Var("cz2")
UNIT_I1 = Const(I1)
UNIT_I2 = Const(I2)

# omega = z1 + z2*i2 and its dagger_2 conjugate.
OMEGA = Add(Z1, Mul(Z2, UNIT_I2))
OMEGA_D2 = Sub(Z1, Mul(Z2, UNIT_I2))

# Real coordinates written through the Wirtinger variables.
X = Div(Add(Z1, CZ1), const(2.0))
Y = Div(Sub(Z1, CZ1), Mul(const(2.0), UNIT_I1))
P = Div(Add(Z2, CZ2), const(2.0))
Q = Div(Sub(Z2, CZ2), Mul(const(2.0), UNIT_I1))


def _is(e: Expr, value: float) -> bool:
    return isinstance(e, Const) and e.value.is_scalar and e.value == Bicomplex(value)


def add(a: Expr, b: Expr) -> Expr:
    if _is(a, 0.0):
        return b
    if _is(b, 0.0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value + b.value)
    return Add(a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if _is(b, 0.0):
        return a
    if _is(a, 0.0):
        return neg(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value - b.value)
    return Sub(a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if _is(a, 0.0) or _is(b, 0.0):
        return ZERO
    if _is(a, 1.0):
        return b
    if _is(b, 1.0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value * b.value)
    return Mul(a, b)


def div(a: Expr, b: Expr) -> Expr:
    if _is(a, 0.0):
        return ZERO
    if _is(b, 1.0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return Const(a.value / b.value)
    return Div(a, b)


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def power(a: Expr, n: int) -> Expr:
    n = int(n)
    if n == 0:
        return ONE
    if n == 1:
        return a
    if isinstance(a, Const):
        return Const(a.value ** n)
    return Pow(a, n)


def func(name: str, arg: Expr) -> Expr:
    if name not in FUNCTIONS:
        raise ValueError(f"unsupported function {name!r}")
    if isinstance(arg, Const):
        return Const(ELEMENTARY[name](arg.value))
    return Func(name, arg)


def exp(e: Expr) -> Expr:
    return func("exp", e)


def sin(e: Expr) -> Expr:
    return func("sin", e)


def cos(e: Expr) -> Expr:
    return func("cos", e)


def sinh(e: Expr) -> Expr:
    return func("sinh", e)


def cosh(e: Expr) -> Expr:
    return func("cosh", e)


# ----------------------------------------------------------------------
# Walkers
# ----------------------------------------------------------------------

class _Memo:
    """Identity-keyed cache; keeps the key objects alive for the walk."""

    def __init__(self) -> None:
        self._store: Dict[int, tuple] = {}

    def get(self, node: Expr):
        hit = self._store.get(id(node))
        return None if hit is None else hit[1]

    def put(self, node: Expr, result):
        self._store[id(node)] = (node, result)
        return result


def walk(e: Expr) -> Iterator[Expr]:
    """Each distinct node once, parents before children."""
    seen: set[int] = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        yield node
        stack.extend(reversed(node.children()))


def free_variables(e: Expr) -> set[str]:
    return {n.name for n in walk(e) if isinstance(n, Var)}


def node_count(e: Expr) -> int:
    return sum(1 for _ in walk(e))


# -- differentiation ----------------------------------------------------

def differentiate(e: Expr, var: str) -> Expr:
    """Exact partial derivative with respect to one of the four variables."""
    if var not in VARIABLES:
        raise ValueError(f"unknown variable {var!r}")
    memo = _Memo()

    def d(node: Expr) -> Expr:
        hit = memo.get(node)
        if hit is not None:
            return hit
        return memo.put(node, _derive(node, var, d))

    return d(e)


@singledispatch
def _derive(e: Expr, var: str, d: Callable[[Expr], Expr]) -> Expr:
    raise NotImplementedError(f"cannot differentiate a {type(e).__name__}")


@_derive.register
def _(e: Const, var: str, d) -> Expr:
    return ZERO


@_derive.register
def _(e: Var, var: str, d) -> Expr:
    return ONE if e.name == var else ZERO


@_derive.register
def _(e: Neg, var: str, d) -> Expr:
    return neg(d(e.arg))


@_derive.register
def _(e: Add, var: str, d) -> Expr:
    return add(d(e.left), d(e.right))


@_derive.register
def _(e: Sub, var: str, d) -> Expr:
    return sub(d(e.left), d(e.right))


@_derive.register
def _(e: Mul, var: str, d) -> Expr:
    return add(mul(d(e.left), e.right), mul(e.left, d(e.right)))


@_derive.register
def _(e: Div, var: str, d) -> Expr:
    num, den = e.left, e.right
    return sub(div(d(num), den), div(mul(num, d(den)), power(den, 2)))


@_derive.register
def _(e: Pow, var: str, d) -> Expr:
    if e.exponent == 0:
        return ZERO
    return mul(mul(const(float(e.exponent)), power(e.base, e.exponent - 1)), d(e.base))


_CHAIN = {
    "exp": lambda a: func("exp", a),
    "sin": lambda a: func("cos", a),
    "cos": lambda a: neg(func("sin", a)),
    "sinh": lambda a: func("cosh", a),
    "cosh": lambda a: func("sinh", a),
}


@_derive.register
def _(e: Func, var: str, d) -> Expr:
    inner = d(e.arg)
    if _is(inner, 0.0):
        return ZERO
    return mul(_CHAIN[e.name](e.arg), inner)


# -- structural rewrites -----------------------------------------------

def _rebuild(node: Expr, kids: list[Expr]) -> Expr:
    if isinstance(node, Neg):
        return neg(kids[0])
    if isinstance(node, Add):
        return add(*kids)
    if isinstance(node, Sub):
        return sub(*kids)
    if isinstance(node, Mul):
        return mul(*kids)
    if isinstance(node, Div):
        return div(*kids)
    if isinstance(node, Pow):
        return power(kids[0], node.exponent)
    if isinstance(node, Func):
        return func(node.name, kids[0])
    raise TypeError(type(node).__name__)


def _map_leaves(e: Expr, leaf: Callable[[Expr], Expr]) -> Expr:
    memo = _Memo()

    def go(node: Expr) -> Expr:
        hit = memo.get(node)
        if hit is not None:
            return hit
        if isinstance(node, (Const, Var)):
            return memo.put(node, leaf(node))
        return memo.put(node, _rebuild(node, [go(c) for c in node.children()]))

    return go(e)


def conjugate_expr(e: Expr, k: int) -> Expr:
    """The expression of w^dagger_k.

    Conjugations are ring automorphisms fixing the reals, so they pass through
    sums, products, quotients and the real-coefficient elementary functions.
    On the C(i1)-valued variables dagger_2 is the identity while dagger_1 and
    dagger_3 are complex conjugation, i.e. zk <-> czk.
    """
    k = Conjugation(k)
    if k is Conjugation.D0:
        return e
    swap = k in (Conjugation.D1, Conjugation.D3)

    def leaf(node: Expr) -> Expr:
        if isinstance(node, Const):
            return Const(node.value.conjugate(k))
        return Var(_SWAP[node.name]) if swap else node

    return _map_leaves(e, leaf)


def substitute(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    def leaf(node: Expr) -> Expr:
        if isinstance(node, Var) and node.name in mapping:
            return mapping[node.name]
        return node

    return _map_leaves(e, leaf)


# -- algebraic projections lifted to expressions ---------------------------

def sc_expr(e: Expr, axis: Axis | str) -> Expr:
    axis = Axis(axis)
    return mul(HALF, add(e, conjugate_expr(e, axis.conjugation)))


def vec_expr(e: Expr, axis: Axis | str) -> Expr:
    axis = Axis(axis)
    u = COMPLEMENT[axis]
    return mul(Const(u.scale(-0.5)), sub(e, conjugate_expr(e, axis.conjugation)))


def modulus_sq_expr(e: Expr, axis: Axis | str) -> Expr:
    axis = Axis(axis)
    return mul(e, conjugate_expr(e, axis.conjugation))


# -- evaluation ----------------------------------------------------------

def evaluate(e: Expr, env: Mapping[str, Bicomplex]) -> Bicomplex:
    """Value of ``e`` with the variables bound to (array-valued) bicomplex numbers.

    Raises EvaluationError at the first grid index where a denominator falls
    in the null cone or the result is not finite.
    """
    memo = _Memo()

    def ev(node: Expr) -> Bicomplex:
        hit = memo.get(node)
        if hit is not None:
            return hit
        return memo.put(node, _evaluate(node, env, ev))

    with np.errstate(all="ignore"):
        value = ev(e)
    bad = ~np.isfinite(np.asarray(value.norm_sq()))
    if np.any(bad):
        raise EvaluationError("non-finite value", int(np.flatnonzero(bad)[0]) if bad.ndim else None)
    return value


@singledispatch
def _evaluate(e: Expr, env, ev) -> Bicomplex:
    raise NotImplementedError(type(e).__name__)


@_evaluate.register
def _(e: Const, env, ev) -> Bicomplex:
    return e.value


@_evaluate.register
def _(e: Var, env, ev) -> Bicomplex:
    try:
        return env[e.name]
    except KeyError:
        raise EvaluationError(f"variable {e.name} is unbound") from None


@_evaluate.register
def _(e: Neg, env, ev) -> Bicomplex:
    return -ev(e.arg)


@_evaluate.register
def _(e: Add, env, ev) -> Bicomplex:
    return ev(e.left) + ev(e.right)


@_evaluate.register
def _(e: Sub, env, ev) -> Bicomplex:
    return ev(e.left) - ev(e.right)


@_evaluate.register
def _(e: Mul, env, ev) -> Bicomplex:
    return ev(e.left) * ev(e.right)


def _guarded_inverse(value: Bicomplex) -> Bicomplex:
    try:
        return value.inverse()
    except NullConeError as exc:
        raise EvaluationError("denominator in the null cone", exc.index) from None


@_evaluate.register
def _(e: Div, env, ev) -> Bicomplex:
    return ev(e.left) * _guarded_inverse(ev(e.right))


@_evaluate.register
def _(e: Pow, env, ev) -> Bicomplex:
    base = ev(e.base)
    if e.exponent < 0:
        base = _guarded_inverse(base)
    return base ** abs(e.exponent)


@_evaluate.register
def _(e: Func, env, ev) -> Bicomplex:
    return ELEMENTARY[e.name](ev(e.arg))
