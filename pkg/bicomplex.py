"""Bicomplex numbers: the commutative ring T spanned by 1, i1, i2, j = i1*i2.

A value is stored as four real components ``w = w0 + w1*i1 + w2*i2 + w3*j``.
The two other views are derived on demand and never stored:

* ``z1 = w0 + w1*i1`` and ``z2 = w2 + w3*i1`` with ``w = z1 + z2*i2``;
* the idempotent components ``P1 = z1 - z2*i1``, ``P2 = z1 + z2*i1`` with
  ``w = P1*e1 + P2*e2``, ``e1 = (1+j)/2``, ``e2 = (1-j)/2``.

C(i1) numbers are represented by Python/numpy complex numbers with ``1j``
standing for i1. Components may be numpy arrays; every operation broadcasts,
which is how sampled fields are carried around.
"""

from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from enum import Enum, IntEnum
from typing import Callable, Tuple, Union

import numpy as np
from numpy.typing import NDArray

from config import NULL_CONE_TOL
from errors import DslSyntaxError, NullConeError, SubalgebraError

logger = logging.getLogger("bvk.bicomplex")

Real = Union[float, NDArray[np.float64]]
Complex = Union[complex, NDArray[np.complex128]]

# Out-of-subalgebra components of a square modulus, relative to |w|^2.
MEMBERSHIP_FLOOR = 1e-13


class Conjugation(IntEnum):
    """The conjugations dagger_0 (identity) .. dagger_3."""

    D0 = 0
    D1 = 1
    D2 = 2
    D3 = 3


# Sign pattern applied to (w0, w1, w2, w3).
_SIGNS = {
    Conjugation.D0: (1.0, 1.0, 1.0, 1.0),
    Conjugation.D1: (1.0, -1.0, 1.0, -1.0),
    Conjugation.D2: (1.0, 1.0, -1.0, -1.0),
    Conjugation.D3: (1.0, -1.0, -1.0, 1.0),
}


def compose_conjugations(k1: int, k2: int) -> Conjugation:
    """Klein four-group table: the index of the composition is k1 XOR k2."""
    return Conjugation(int(k1) ^ int(k2))


class Axis(str, Enum):
    """Names the subalgebra C(i1), C(i2) or D = C(j)."""

    I1 = "i1"
    I2 = "i2"
    J = "j"

    @property
    def conjugation(self) -> Conjugation:
        """The conjugation that fixes this subalgebra pointwise."""
        return {Axis.I1: Conjugation.D2, Axis.I2: Conjugation.D1, Axis.J: Conjugation.D3}[self]


@dataclass(frozen=True, eq=False)
class Bicomplex:
    w0: Real = 0.0
    w1: Real = 0.0
    w2: Real = 0.0
    w3: Real = 0.0

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------
    @classmethod
    def coerce(cls, value: object) -> Bicomplex:
        if isinstance(value, Bicomplex):
            return value
        if isinstance(value, (bool, int, float, np.floating, np.integer)):
            return cls(float(value))
        if isinstance(value, (complex, np.complexfloating)):
            return cls(float(value.real), float(value.imag))
        if isinstance(value, np.ndarray):
            if np.iscomplexobj(value):
                return cls(value.real.astype(float), value.imag.astype(float))
            return cls(value.astype(float))
        raise TypeError(f"cannot interpret {type(value).__name__} as a bicomplex number")

    @classmethod
    def from_views(cls, z1: Complex, z2: Complex) -> Bicomplex:
        z1 = np.asarray(z1, dtype=complex)
        z2 = np.asarray(z2, dtype=complex)
        return cls(*_unwrap(z1.real, z1.imag, z2.real, z2.imag))

    @classmethod
    def from_idempotent(cls, p1: Complex, p2: Complex) -> Bicomplex:
        p1 = np.asarray(p1, dtype=complex)
        p2 = np.asarray(p2, dtype=complex)
        return cls.from_views((p1 + p2) / 2.0, -0.5j * (p2 - p1))

    # ------------------------------------------------------------------
    # Views
    # ------------------------------------------------------------------
    @property
    def z1(self) -> Complex:
        return self.w0 + 1j * np.asarray(self.w1)

    @property
    def z2(self) -> Complex:
        return self.w2 + 1j * np.asarray(self.w3)

    @property
    def p1(self) -> Complex:
        return self.z1 - 1j * self.z2

    @property
    def p2(self) -> Complex:
        return self.z1 + 1j * self.z2

    def components(self) -> Tuple[Real, Real, Real, Real]:
        return (self.w0, self.w1, self.w2, self.w3)

    @property
    def shape(self) -> Tuple[int, ...]:
        return np.broadcast(*[np.asarray(c) for c in self.components()]).shape

    @property
    def is_scalar(self) -> bool:
        return self.shape == ()

    def broadcast(self) -> Bicomplex:
        """Same value with every component expanded to the common shape."""
        parts = np.broadcast_arrays(*[np.asarray(c, dtype=float) for c in self.components()])
        return Bicomplex(*[np.array(p) for p in parts])

    def take(self, index: int) -> Bicomplex:
        """Scalar element at a flat index of an array-valued bicomplex."""
        full = self.broadcast()
        return Bicomplex(*(float(np.ravel(c)[index]) for c in full.components()))

    # ------------------------------------------------------------------
    # Ring operations
    # ------------------------------------------------------------------
    def __add__(self, other: object) -> Bicomplex:
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return Bicomplex(self.w0 + o.w0, self.w1 + o.w1, self.w2 + o.w2, self.w3 + o.w3)

    __radd__ = __add__

    def __sub__(self, other: object) -> Bicomplex:
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return Bicomplex(self.w0 - o.w0, self.w1 - o.w1, self.w2 - o.w2, self.w3 - o.w3)

    def __rsub__(self, other: object) -> Bicomplex:
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self) -> Bicomplex:
        return Bicomplex(-self.w0, -self.w1, -self.w2, -self.w3)

    def __mul__(self, other: object) -> Bicomplex:
        o = _maybe(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.components()
        e, f, g, h = o.components()
        return Bicomplex(
            a * e - b * f - c * g + d * h,
            a * f + b * e - c * h - d * g,
            a * g + c * e - b * h - d * f,
            a * h + d * e + b * g + c * f,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> Bicomplex:
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other: object) -> Bicomplex:
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int) -> Bicomplex:
        if not isinstance(n, (int, np.integer)):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        n = abs(int(n))
        result = ONE
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, factor: Real) -> Bicomplex:
        return Bicomplex(factor * self.w0, factor * self.w1, factor * self.w2, factor * self.w3)

    # ------------------------------------------------------------------
    # Structure
    # ------------------------------------------------------------------
    def conjugate(self, k: int) -> Bicomplex:
        s = _SIGNS[Conjugation(k)]
        return Bicomplex(s[0] * self.w0, s[1] * self.w1, s[2] * self.w2, s[3] * self.w3)

    def modulus_sq(self, axis: Axis | str) -> Bicomplex:
        axis = Axis(axis)
        result = self * self.conjugate(axis.conjugation)
        outside = _outside(result, axis)
        bound = MEMBERSHIP_FLOOR * np.maximum(self.norm_sq(), np.finfo(float).tiny)
        excess = np.max(np.asarray(outside - bound))
        if excess > 0:
            raise SubalgebraError(axis.value, float(np.max(outside)))
        return result

    def norm_sq(self) -> Real:
        return self.w0 * self.w0 + self.w1 * self.w1 + self.w2 * self.w2 + self.w3 * self.w3

    def norm(self) -> Real:
        return np.sqrt(self.norm_sq())

    def null_mask(self, tol: float = NULL_CONE_TOL) -> NDArray[np.bool_]:
        product = np.abs(self.p1 * self.p2)  # |z1^2 + z2^2|
        return np.asarray(product <= tol * np.maximum(1.0, self.norm_sq()))

    def is_null_cone(self, tol: float = NULL_CONE_TOL) -> bool:
        return bool(np.any(self.null_mask(tol)))

    def inverse(self, tol: float = NULL_CONE_TOL) -> Bicomplex:
        mask = self.null_mask(tol)
        if np.any(mask):
            if self.is_scalar:
                raise NullConeError(format_bicomplex(self))
            index = int(np.flatnonzero(mask)[0])
            raise NullConeError(format_bicomplex(self.take(index)), index)
        return Bicomplex.from_idempotent(1.0 / self.p1, 1.0 / self.p2)

    def idempotent(self) -> IdempotentPair:
        return IdempotentPair(self.p1, self.p2)

    def pi(self) -> Bicomplex:
        return Bicomplex(self.w0, self.w2, self.w1, self.w3)

    def sc(self, axis: Axis | str) -> Bicomplex:
        axis = Axis(axis)
        if axis is Axis.I1:
            return Bicomplex(self.w0, self.w1, 0.0, 0.0)
        if axis is Axis.I2:
            return Bicomplex(self.w0, 0.0, self.w2, 0.0)
        return Bicomplex(self.w0, 0.0, 0.0, self.w3)

    def vec(self, axis: Axis | str) -> Bicomplex:
        axis = Axis(axis)
        if axis is Axis.I1:
            return Bicomplex(self.w2, self.w3, 0.0, 0.0)
        if axis is Axis.I2:
            return Bicomplex(self.w1, 0.0, self.w3, 0.0)
        return Bicomplex(self.w1, 0.0, 0.0, -self.w2)

    # ------------------------------------------------------------------
    # Comparison and printing
    # ------------------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        o = _maybe(other)
        if o is None:
            return NotImplemented
        return all(np.array_equal(np.asarray(x), np.asarray(y)) for x, y in zip(self.components(), o.components()))

    def __hash__(self) -> int:
        if not self.is_scalar:
            raise TypeError("array-valued bicomplex numbers are unhashable")
        return hash(tuple(float(c) for c in self.components()))

    def allclose(self, other: object, rtol: float = 1e-12, atol: float = 1e-12) -> bool:
        o = Bicomplex.coerce(other)
        return bool(np.all((self - o).norm() <= atol + rtol * np.maximum(self.norm(), o.norm())))

    def __repr__(self) -> str:
        if self.is_scalar:
            return f"Bicomplex({format_bicomplex(self)})"
        return f"Bicomplex(shape={self.shape})"

    def __str__(self) -> str:
        return format_bicomplex(self) if self.is_scalar else repr(self)


@dataclass(frozen=True)
class IdempotentPair:
    p1: Complex
    p2: Complex

    def to_bicomplex(self) -> Bicomplex:
        return Bicomplex.from_idempotent(self.p1, self.p2)


def _unwrap(*parts: NDArray) -> Tuple[Real, ...]:
    return tuple(float(p) if np.ndim(p) == 0 else p for p in parts)


def _maybe(value: object) -> Bicomplex | None:
    try:
        return Bicomplex.coerce(value)
    except TypeError:
        return None


def _outside(w: Bicomplex, axis: Axis) -> Real:
    """Magnitude of the components that do not belong to C(axis)."""
    if axis is Axis.I1:
        return np.hypot(w.w2, w.w3)
    if axis is Axis.I2:
        return np.hypot(w.w1, w.w3)
    return np.hypot(w.w1, w.w2)


ZERO = Bicomplex()
ONE = Bicomplex(1.0)
I1 = Bicomplex(0.0, 1.0)
I2 = Bicomplex(0.0, 0.0, 1.0)
J = Bicomplex(0.0, 0.0, 0.0, 1.0)
E1 = Bicomplex(0.5, 0.0, 0.0, 0.5)
E2 = Bicomplex(0.5, 0.0, 0.0, -0.5)

UNITS = {"I1": I1, "I2": I2, "J": J}

# Unit u with w = Sc + Vec*u for each representation.
COMPLEMENT = {Axis.I1: I2, Axis.I2: I1, Axis.J: I1}


# ======================================================================
# Public API (function forms of the operations)
# ======================================================================

def add(a: object, b: object) -> Bicomplex:
    return Bicomplex.coerce(a) + Bicomplex.coerce(b)


def sub(a: object, b: object) -> Bicomplex:
    return Bicomplex.coerce(a) - Bicomplex.coerce(b)


def mul(a: object, b: object) -> Bicomplex:
    return Bicomplex.coerce(a) * Bicomplex.coerce(b)


def scale(a: object, factor: Real) -> Bicomplex:
    return Bicomplex.coerce(a).scale(factor)


def conjugate(w: object, k: int) -> Bicomplex:
    return Bicomplex.coerce(w).conjugate(k)


def modulus_sq(w: object, axis: Axis | str) -> Bicomplex:
    return Bicomplex.coerce(w).modulus_sq(axis)


def euclid_norm(w: object) -> Real:
    return Bicomplex.coerce(w).norm()


def inverse(w: object, tol: float = NULL_CONE_TOL) -> Bicomplex:
    return Bicomplex.coerce(w).inverse(tol)


def inverse_by_conjugate(w: object) -> Bicomplex:
    """w^dagger2 / |w|^2_i1, the textbook formula; used as an oracle for inverse."""
    w = Bicomplex.coerce(w)
    m = w.modulus_sq(Axis.I1).z1
    if np.any(np.abs(m) == 0):
        raise NullConeError(w)
    return w.conjugate(Conjugation.D2) * Bicomplex.coerce(1.0 / np.asarray(m))


def is_null_cone(w: object, tol: float = NULL_CONE_TOL) -> bool:
    if tol < 0:
        raise ValueError("tolerance must be non-negative")
    return Bicomplex.coerce(w).is_null_cone(tol)


def to_idempotent(w: object) -> IdempotentPair:
    return Bicomplex.coerce(w).idempotent()


def from_idempotent(p: IdempotentPair) -> Bicomplex:
    return p.to_bicomplex()


def pi_map(w: object) -> Bicomplex:
    return Bicomplex.coerce(w).pi()


def sc(w: object, axis: Axis | str) -> Bicomplex:
    return Bicomplex.coerce(w).sc(axis)


def vec(w: object, axis: Axis | str) -> Bicomplex:
    return Bicomplex.coerce(w).vec(axis)


def _lift(fn: Callable[[Complex], Complex]) -> Callable[[object], Bicomplex]:
    def lifted(w: object) -> Bicomplex:
        w = Bicomplex.coerce(w)
        return Bicomplex.from_idempotent(fn(w.p1), fn(w.p2))

    lifted.__name__ = fn.__name__
    lifted.__doc__ = f"Bicomplex {fn.__name__} applied on the idempotent components."
    return lifted


exp = _lift(np.exp)
sin = _lift(np.sin)
cos = _lift(np.cos)
sinh = _lift(np.sinh)
cosh = _lift(np.cosh)

ELEMENTARY = {"exp": exp, "sin": sin, "cos": cos, "sinh": sinh, "cosh": cosh}


def random_bicomplex(rng: np.random.Generator, n: int, spread: float = 1.0) -> Bicomplex:
    """n independent elements with standard-normal components."""
    c = spread * rng.standard_normal((4, n))
    return Bicomplex(c[0], c[1], c[2], c[3])


# ----------------------------------------------------------------------
# Textual form  "a + b*I1 + c*I2 + d*J"
# ----------------------------------------------------------------------
_NUMBER = r"(?:\d+\.?\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|inf|nan)"
_TERM = re.compile(
    rf"\s*(?P<sign>[+-])?\s*(?:(?P<coef>{_NUMBER})(?:\s*\*\s*(?P<unit>I1|I2|J))?|(?P<bare>I1|I2|J))\s*"
)
_SLOT = {None: 0, "I1": 1, "I2": 2, "J": 3}


def parse_bicomplex(text: str) -> Bicomplex:
    parts = [0.0, 0.0, 0.0, 0.0]
    pos = 0
    first = True
    while pos < len(text):
        m = _TERM.match(text, pos)
        if m is None or m.end() == pos:
            raise DslSyntaxError("malformed bicomplex literal", pos)
        if not first and m.group("sign") is None:
            raise DslSyntaxError("expected '+' or '-'", pos)
        sign = -1.0 if m.group("sign") == "-" else 1.0
        if m.group("bare"):
            parts[_SLOT[m.group("bare")]] += sign
        else:
            parts[_SLOT[m.group("unit")]] += sign * float(m.group("coef"))
        pos = m.end()
        first = False
    if first:
        raise DslSyntaxError("empty bicomplex literal", 0)
    return Bicomplex(*parts)


def format_bicomplex(w: Bicomplex) -> str:
    out = repr(float(w.w0))
    for value, unit in ((w.w1, "I1"), (w.w2, "I2"), (w.w3, "J")):
        value = float(value)
        negative = value < 0 or (value == 0 and math.copysign(1.0, value) < 0)
        out += f" {'-' if negative else '+'} {abs(value)!r}*{unit}"
    return out
