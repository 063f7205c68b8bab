"""Named expressions used by the suites and accepted on the command line.

Everything is written in the DSL and parsed on first use. All entries are
regular on the default grid [-1, 1]^4: denominators stay away from the null
cone and f0 instances do not vanish there.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Optional, Tuple

from dsl import parse_expr
from errors import ConfigError, UnknownIdentifier
from expressions import Expr

logger = logging.getLogger("bvk.catalog")


@dataclass(frozen=True)
class FunctionEntry:
    name: str
    src: str
    t_holomorphic: bool


@dataclass(frozen=True)
class PairEntry:
    name: str
    F: str
    G: str


@dataclass(frozen=True)
class EPairEntry:
    """Two classical planar pairs and one planar pseudoanalytic function for each."""

    name: str
    Fe1: str
    Ge1: str
    Fe2: str
    Ge2: str
    we1: str
    we2: str


W = "(z1 + z2*I2)"

FUNCTIONS: Tuple[FunctionEntry, ...] = (
    FunctionEntry("omega-sq", f"{W}^2", True),
    FunctionEntry("omega-cube", f"{W}^3", True),
    FunctionEntry("exp-omega", f"exp{W}", True),
    FunctionEntry("sin-omega", f"sin{W}", True),
    FunctionEntry("cosh-omega", f"cosh{W}", True),
    FunctionEntry("poly-omega", f"{W}^2 - 3*{W} + 2*I1", True),
    FunctionEntry("inv-shift-omega", f"1/({W} + 4)", True),
    FunctionEntry("sinh-omega-sq", f"sinh({W}^2/4)", True),
    FunctionEntry("constant", "2 + 3*I1 - J", True),
    FunctionEntry("omega-dagger2", "z1 - z2*I2", False),
    FunctionEntry("omega-dagger1", "cz1 + cz2*I2", False),
    FunctionEntry("omega-dagger3", "cz1 - cz2*I2", False),
    FunctionEntry("cz1", "cz1", False),
    FunctionEntry("z1-cz1", "z1*cz1", False),
    FunctionEntry("exp-z1", "exp(z1)", False),
    FunctionEntry("cosh-z1", "cosh(z1)", False),
    FunctionEntry("sin-z1z2", "sin(z1*z2)", False),
    FunctionEntry("x2-y2", "x^2 - y^2", False),
    FunctionEntry("exp-z1-sin-z2", "exp(z1)*sin(z2)", False),
    FunctionEntry("quotient", "z1/(z2^2 + 9)", False),
)

# Functions that are not holomorphic in z1 and z2 separately. Their second
# differences keep an h^2 error term and the real expansion converges at
# order 2.
SWEEP_FUNCTIONS: Dict[str, str] = {
    "quartic-x-p": "x^4 + p^4",
    "x2-cos-q": "x^2*cos(q)",
    "z1-cz1-exp-z1": "z1*cz1*exp(z1)",
}

# Holomorphic in each of z1 and z2: the h^2 terms of the stencils cancel and
# the observed order is at least 2 (4 in exact arithmetic).
HOLOMORPHIC_SWEEP = ("exp-z1", "cosh-z1", "sin-z1z2")

# Pairs of the class R1 (coefficients in C(i1)).
PAIRS: Tuple[PairEntry, ...] = (
    PairEntry("unit", "1", "I2"),
    PairEntry("exp-z1", "exp(z1)", "I2/exp(z1)"),
    PairEntry("cosh-z1", "cosh(z1)", "I2/cosh(z1)"),
    PairEntry("exp-z1-cos-z2", "exp(z1)*cos(z2)", "I2/(exp(z1)*cos(z2))"),
    PairEntry("exp-z2", "exp(z2)", "I2*exp(-z2)"),
    PairEntry("exp-omega", f"exp{W}", f"I2*exp{W}"),
    PairEntry("omega-shift", f"{W} + 4", f"I2*({W} + 4)"),
    PairEntry("rotated-constants", "1 + I1", "I2 + J"),
    PairEntry("affine", "1", "I2 + z1"),
    PairEntry("exp-z1-tilted", "exp(z1)*(1 + 0.25*z2*I2)", "I2*exp(-z1)"),
    PairEntry("conjugate-weight", "1", "I2*exp(cz1)"),
    PairEntry("exp-cz1", "exp(cz1)", "I2"),
)

# Test functions for the (F, G)-derivative and the pi correspondence.
TEST_FUNCTIONS: Tuple[str, ...] = (
    f"{W}^2",
    f"exp{W}",
    f"exp{W}*{W}^2",
    "z1*cz2 + I2*z2",
    "sin(z1) + I2*cos(z2)",
)

# Pseudoanalytic functions with nonzero derivative, keyed by pair name.
PSEUDOANALYTIC: Dict[str, Tuple[str, ...]] = {
    "unit": (f"{W}^2", f"exp{W}", f"sin{W}"),
    "exp-omega": (f"exp{W}*{W}^2", f"exp{W}*cosh{W}"),
    "omega-shift": (f"({W} + 4)*{W}^3",),
}

# Solutions f0 of (Delta_C - nu) f = 0 that do not vanish on the default grid.
F0_INSTANCES: Dict[str, str] = {
    "exp-z1": "exp(z1)",
    "cosh-z1": "cosh(z1)",
    "exp-z1-cos-z2": "exp(z1)*cos(z2)",
    "exp-z2": "exp(z2)",
    "one": "1",
    "exp-x": "exp(x)",
}

# Test functions phi for the factorization; all C(i1)-valued.
PHI_FUNCTIONS: Tuple[str, ...] = (
    "z1^2",
    "exp(z2)",
    "sin(z1*z2)",
    "z1*cz1",
    "cosh(z1 + z2) + x^2 - q",
)

# Planar pairs use z1 as the single complex variable z.
E_PAIRS: Tuple[EPairEntry, ...] = (
    EPairEntry("analytic", "1", "I1", "1", "I1", "exp(z1)", "z1^2"),
    EPairEntry("exp", "exp(z1)", "I1*exp(z1)", "1", "I1", "exp(z1)*z1^2", "sin(z1)"),
    EPairEntry("real-weight", "1 + x^2", "I1/(1 + x^2)", "exp(x)", "I1*exp(-x)",
               "2*(1 + x^2) - 3*I1/(1 + x^2)", "exp(x) + 0.5*I1*exp(-x)"),
    EPairEntry("polynomial", "2 + z1", "I1*(2 + z1)", "1", "z1 + 2*I1", "(2 + z1)*z1^3", "1.5 - 2*(z1 + 2*I1)"),
    EPairEntry("conjugate-weight", "1", "I1*exp(x)", "exp(cz1)", "I1*exp(cz1)",
               "3 + 0.5*I1*exp(x)", "exp(cz1)*z1"),
)


def _index(entries) -> Dict[str, object]:
    return {e.name: e for e in entries}


_FUNCTION_INDEX = _index(FUNCTIONS)
_PAIR_INDEX = _index(PAIRS)
_E_PAIR_INDEX = _index(E_PAIRS)


@lru_cache(maxsize=None)
def expr(src: str) -> Expr:
    """Parsed DSL text; cached so the same string always yields the same tree."""
    return parse_expr(src)


def function(name: str) -> Expr:
    try:
        return expr(_FUNCTION_INDEX[name].src)  # type: ignore[attr-defined]
    except KeyError:
        raise UnknownIdentifier(name) from None


def resolve_f0(text: str) -> Tuple[str, Expr]:
    """Catalog name or DSL string for f0."""
    if text in F0_INSTANCES:
        return text, expr(F0_INSTANCES[text])
    return text, _parse_input(text, "f0")


def resolve_pair(text: str) -> Tuple[str, Expr, Expr]:
    """Catalog name or ``"F_dsl,G_dsl"``."""
    entry: Optional[PairEntry] = _PAIR_INDEX.get(text)  # type: ignore[assignment]
    if entry is not None:
        return entry.name, expr(entry.F), expr(entry.G)
    parts = text.split(",")
    if len(parts) != 2:
        raise ConfigError(f"--pair expects a catalog name or 'F,G', got {text!r}")
    return text, _parse_input(parts[0], "pair F"), _parse_input(parts[1], "pair G")


def resolve_function(text: str) -> Tuple[str, Expr]:
    if text in _FUNCTION_INDEX:
        return text, function(text)
    return text, _parse_input(text, "w")


def e_pair(name: str) -> EPairEntry:
    try:
        return _E_PAIR_INDEX[name]  # type: ignore[return-value]
    except KeyError:
        raise UnknownIdentifier(name) from None


def _parse_input(src: str, what: str) -> Expr:
    try:
        return parse_expr(src)
    except Exception as exc:
        logger.warning("Rejected input | field=%s | src=%r | error=%s", what, src, exc)
        raise ConfigError(f"invalid {what} expression {src!r}: {exc}") from exc
