"""Generating pairs and pseudoanalytic functions in the three bicomplex classes.

A class fixes a subalgebra S (C(i1), C(i2) or D), the conjugation c that
fixes S pointwise and the unit u with w = Sc(w) + Vec(w)*u:

    class  S      c         u
    R1     C(i1)  dagger2   i2
    R2     C(i2)  dagger1   i1
    R3     D      dagger3   i1

For a pair (F, G) every w splits uniquely as w = phi*F + psi*G with phi,
psi in S:

    phi = Vec(w^c G) / Vec(F^c G),    psi = -Vec(w^c F) / Vec(F^c G).

With D = F G^c - F^c G the characteristic coefficients are

    a(k) = -(F^c G_k - F_k G^c) / D,  b(k) = (F G_k - F_k G) / D,

(G_k the dagger_k derivative; A and B use d_omega), so that F and G both
solve w_k = a(k) w + b(k) w^c and the (F, G)-derivative is
w' = w_omega - A w - B w^c = phi_omega F + psi_omega G.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np

from bicomplex import COMPLEMENT, J, Axis, Bicomplex, Conjugation
from calculus import (
    EXACT_TOL,
    d_omega,
    d_omega_dagger,
    idempotent_construction,
    transport_to_p1,
)
from errors import DegeneratePair
from expressions import (
    UNIT_I1,
    X,
    Y,
    P,
    Q,
    ZERO,
    Const,
    Expr,
    add,
    const,
    conjugate_expr,
    differentiate,
    div,
    evaluate,
    mul,
    neg,
    sc_expr,
    sub,
    substitute,
    vec_expr,
)
from grid import GridDomain, SampledField, e_product, max_residual, sample
from schemas import ResidualReport

logger = logging.getLogger("bvk.pseudoanalytic")

# Pointwise nondegeneracy floor, relative to max(1, |F||G|).
NONDEGENERACY_FLOOR = 1e-8
NONDEGENERACY_TOL = 1.0 / NONDEGENERACY_FLOOR
RECONSTRUCTION_TOL = 1e-10
VEKUA_TOL = 1e-11
TRANSPORT_TOL = 1e-10
LIMIT_TOL = 1e-6


class PairClass(str, Enum):
    R1 = "R1"
    R2 = "R2"
    R3 = "R3"

    @property
    def axis(self) -> Axis:
        return {PairClass.R1: Axis.I1, PairClass.R2: Axis.I2, PairClass.R3: Axis.J}[self]

    @property
    def conjugation(self) -> Conjugation:
        return self.axis.conjugation

    @property
    def unit(self) -> Bicomplex:
        return COMPLEMENT[self.axis]


@dataclass(frozen=True)
class GeneratingPair:
    F: Expr
    G: Expr
    cls: PairClass
    domain: GridDomain
    name: str = ""

    def conj(self, e: Expr) -> Expr:
        return conjugate_expr(e, self.cls.conjugation)


@dataclass(frozen=True)
class CharCoefficients:
    a: Dict[int, Expr]
    b: Dict[int, Expr]
    A: Expr
    B: Expr
    denominator: Expr

    @property
    def a1(self) -> Expr:
        return self.a[1]

    @property
    def b1(self) -> Expr:
        return self.b[1]

    @property
    def a2(self) -> Expr:
        return self.a[2]

    @property
    def b2(self) -> Expr:
        return self.b[2]

    @property
    def a3(self) -> Expr:
        return self.a[3]

    @property
    def b3(self) -> Expr:
        return self.b[3]


@dataclass(frozen=True)
class Decomposition:
    phi_expr: Expr
    psi_expr: Expr
    phi: SampledField
    psi: SampledField
    reconstruction_residual: float
    membership_residual: float
    detail: Dict[str, object] = field(default_factory=dict)


# ----------------------------------------------------------------------
# Projections
# ----------------------------------------------------------------------

def vec_product(p: GeneratingPair, a: Expr, b: Expr) -> Expr:
    """Vec(a^c b) in the pair's representation."""
    return vec_expr(mul(p.conj(a), b), p.cls.axis)


def _outside(values: Bicomplex, axis: Axis) -> np.ndarray:
    """Components of ``values`` outside the subalgebra named by ``axis``."""
    if axis is Axis.I1:
        return np.hypot(values.w2, values.w3)
    if axis is Axis.I2:
        return np.hypot(values.w1, values.w3)
    return np.hypot(values.w1, values.w2)


def membership_residual(values: Bicomplex, axis: Axis) -> float:
    out = np.atleast_1d(np.asarray(_outside(values, axis), dtype=float))
    scale = np.maximum(1.0, np.atleast_1d(np.asarray(values.norm(), dtype=float)))
    return float(np.max(out / scale))


def _nondegeneracy(p: GeneratingPair) -> Tuple[np.ndarray, Dict[str, Bicomplex]]:
    env = p.domain.env()
    vec = evaluate(vec_product(p, p.F, p.G), env)
    f = evaluate(p.F, env)
    g = evaluate(p.G, env)
    vec = vec + Bicomplex(np.zeros(p.domain.size))
    smallest = np.minimum(np.abs(vec.p1), np.abs(vec.p2))
    scale = np.maximum(1.0, np.asarray(f.norm()) * np.asarray(g.norm()))
    return np.atleast_1d(smallest / scale), {"vec": vec}


def validate_pair(p: GeneratingPair) -> ResidualReport:
    """Min over the grid of the class nondegeneracy measure.

    R1/R2 need Vec(F^c G) != 0; R3 needs Vec(F^c G) invertible in D, i.e.
    both idempotent components nonzero. Raises DegeneratePair at the first
    offending grid point. The residual is the reciprocal of the minimum and
    the tolerance is 1/floor, so the report passes exactly when min >= floor.
    """
    started = time.perf_counter()
    measure, _ = _nondegeneracy(p)
    k = int(np.argmin(measure))
    worst = float(measure[k])
    if not np.isfinite(worst) or worst < NONDEGENERACY_FLOOR:
        logger.warning("Degenerate pair | name=%s | class=%s | index=%d | measure=%.3e",
                       p.name, p.cls.value, k, worst)
        raise DegeneratePair(p.cls.value, k, worst)
    reciprocal = 1.0 / worst
    return ResidualReport.measured(
        f"{p.cls.value} generating pair nondegeneracy", p.domain.metadata(), (reciprocal, reciprocal),
        NONDEGENERACY_TOL, started, {"min_measure": worst, "floor": NONDEGENERACY_FLOOR, "pair": p.name},
    )


def vec_determinant_check(p: GeneratingPair, tol: Optional[float] = None) -> ResidualReport:
    """Vec(F^c G) equals det [[Sc F, Sc G], [Vec F, Vec G]]."""
    started = time.perf_counter()
    tol = EXACT_TOL if tol is None else tol
    axis = p.cls.axis
    det = sub(mul(sc_expr(p.F, axis), vec_expr(p.G, axis)), mul(vec_expr(p.F, axis), sc_expr(p.G, axis)))
    a = sample(vec_product(p, p.F, p.G), p.domain).values
    b = sample(det, p.domain).values
    worst, mean, _ = max_residual(a - b, a, b)
    return ResidualReport.measured("Vec(F^c G) as a 2x2 determinant", p.domain.metadata(),
                                   (worst, mean), tol, started, {"pair": p.name})


# ----------------------------------------------------------------------
# Decomposition
# ----------------------------------------------------------------------

def decompose(w: Expr, p: GeneratingPair) -> Decomposition:
    validate_pair(p)
    axis = p.cls.axis
    den = vec_product(p, p.F, p.G)
    phi = div(vec_product(p, w, p.G), den)
    psi = neg(div(vec_product(p, w, p.F), den))
    phi_f = sample(phi, p.domain)
    psi_f = sample(psi, p.domain)
    target = sample(w, p.domain).values
    env = p.domain.env()
    rebuilt = phi_f.values * evaluate(p.F, env) + psi_f.values * evaluate(p.G, env)
    recon, _, _ = max_residual(rebuilt - target, target)
    member = max(membership_residual(phi_f.values, axis), membership_residual(psi_f.values, axis))
    return Decomposition(phi, psi, phi_f, psi_f, recon, member)


def decomposition_report(w: Expr, p: GeneratingPair, tol: Optional[float] = None) -> ResidualReport:
    started = time.perf_counter()
    tol = RECONSTRUCTION_TOL if tol is None else tol
    d = decompose(w, p)
    worst = max(d.reconstruction_residual, d.membership_residual)
    return ResidualReport.measured(
        f"unique decomposition w = phi F + psi G ({p.cls.value})", p.domain.metadata(),
        (worst, d.reconstruction_residual), tol, started,
        {"reconstruction": d.reconstruction_residual, "membership": d.membership_residual, "pair": p.name},
    )


# ----------------------------------------------------------------------
# Characteristic coefficients and derivatives
# ----------------------------------------------------------------------

def _assert_invertible(p: GeneratingPair, den: Expr) -> None:
    values = sample(den, p.domain).values
    mask = values.null_mask()
    if np.any(mask):
        k = int(np.flatnonzero(np.atleast_1d(mask))[0])
        raise DegeneratePair(p.cls.value, k, float(np.atleast_1d(np.abs(values.p1 * values.p2))[k]))


def char_coeffs(p: GeneratingPair, printed: bool = False) -> CharCoefficients:
    """Coefficients of the class Vekua equations.

    ``printed`` replaces the class conjugation in the two numerator terms of
    a(k) by dagger_k; F and G then solve their own equations only when the
    reduction condition holds.
    """
    validate_pair(p)
    F, G = p.F, p.G
    Fc, Gc = p.conj(F), p.conj(G)
    den = sub(mul(F, Gc), mul(Fc, G))
    _assert_invertible(p, den)
    a: Dict[int, Expr] = {}
    b: Dict[int, Expr] = {}
    for k in (1, 2, 3):
        Fk, Gk = d_omega_dagger(F, k), d_omega_dagger(G, k)
        Fs, Gs = (conjugate_expr(F, k), conjugate_expr(G, k)) if printed else (Fc, Gc)
        a[k] = neg(div(sub(mul(Fs, Gk), mul(Fk, Gs)), den))
        b[k] = div(sub(mul(F, Gk), mul(Fk, G)), den)
    Fw, Gw = d_omega(F), d_omega(G)
    A = neg(div(sub(mul(Fc, Gw), mul(Fw, Gc)), den))
    B = div(sub(mul(F, Gw), mul(Fw, G)), den)
    return CharCoefficients(a, b, A, B, den)


def denominator_identity(p: GeneratingPair, tol: Optional[float] = None) -> ResidualReport:
    """F G^c - F^c G = -2 u Vec(F^c G)."""
    started = time.perf_counter()
    tol = EXACT_TOL if tol is None else tol
    coeffs = char_coeffs(p)
    rhs = mul(Const(p.cls.unit.scale(-2.0)), vec_product(p, p.F, p.G))
    a = sample(coeffs.denominator, p.domain).values
    b = sample(rhs, p.domain).values
    worst, mean, _ = max_residual(a - b, a, b)
    return ResidualReport.measured("denominator F G^c - F^c G = -2 u Vec(F^c G)", p.domain.metadata(),
                                   (worst, mean), tol, started, {"pair": p.name})


def fg_derivative(w: Expr, p: GeneratingPair, coeffs: Optional[CharCoefficients] = None) -> Expr:
    """w' = w_omega - A w - B w^c."""
    coeffs = coeffs or char_coeffs(p)
    return sub(sub(d_omega(w), mul(coeffs.A, w)), mul(coeffs.B, p.conj(w)))


def fg_derivative_by_parts(w: Expr, p: GeneratingPair) -> Expr:
    """w' = phi_omega F + psi_omega G."""
    d = decompose(w, p)
    return add(mul(d_omega(d.phi_expr), p.F), mul(d_omega(d.psi_expr), p.G))


def determinant_derivative(w: Expr, p: GeneratingPair) -> Expr:
    """w' as the 3x3 determinant |w_omega w w^c; F_omega F F^c; G_omega G G^c| over |F F^c; G G^c|."""
    F, G = p.F, p.G
    Fc, Gc, wc = p.conj(F), p.conj(G), p.conj(w)
    Fw, Gw, ww = d_omega(F), d_omega(G), d_omega(w)
    minor_w = sub(mul(F, Gc), mul(Fc, G))
    minor_1 = sub(mul(Fw, Gc), mul(Fc, Gw))
    minor_c = sub(mul(Fw, G), mul(F, Gw))
    top = add(sub(mul(ww, minor_w), mul(w, minor_1)), mul(wc, minor_c))
    return div(top, minor_w)


def fg_derivative_agreement(w: Expr, p: GeneratingPair, tol: Optional[float] = None) -> ResidualReport:
    """The coefficient, by-parts and determinant forms of w' agree."""
    started = time.perf_counter()
    tol = RECONSTRUCTION_TOL if tol is None else tol
    coeffs = char_coeffs(p)
    forms = {
        "coefficients": sample(fg_derivative(w, p, coeffs), p.domain).values,
        "phi_psi": sample(fg_derivative_by_parts(w, p), p.domain).values,
        "determinant": sample(determinant_derivative(w, p), p.domain).values,
    }
    base = forms["coefficients"]
    residuals = {k: max_residual(v - base, v, base)[0] for k, v in forms.items() if k != "coefficients"}
    worst = max(residuals.values())
    return ResidualReport.measured(f"three forms of the (F,G)-derivative ({p.cls.value})", p.domain.metadata(),
                                   (worst, worst), tol, started, {"residuals": residuals, "pair": p.name})


def vekua_expr(w: Expr, p: GeneratingPair, k: int, coeffs: Optional[CharCoefficients] = None) -> Expr:
    coeffs = coeffs or char_coeffs(p)
    return sub(sub(d_omega_dagger(w, k), mul(coeffs.a[k], w)), mul(coeffs.b[k], p.conj(w)))


def vekua_residual(w: Expr, p: GeneratingPair, k: int, tol: Optional[float] = None,
                   coeffs: Optional[CharCoefficients] = None) -> ResidualReport:
    """w_{omega dagger k} = a(k) w + b(k) w^c, measured on the pair's domain."""
    started = time.perf_counter()
    tol = VEKUA_TOL if tol is None else tol
    coeffs = coeffs or char_coeffs(p)
    residual = sample(vekua_expr(w, p, k, coeffs), p.domain).values
    scale = sample(w, p.domain).values
    worst, mean, _ = max_residual(residual, scale)
    return ResidualReport.measured(f"Vekua equation k={k} ({p.cls.value})", p.domain.metadata(),
                                   (worst, mean), tol, started, {"k": k, "pair": p.name})


def reduction_condition(p: GeneratingPair, k: int, samples: Tuple[Expr, ...] = (),
                        tol: Optional[float] = None) -> ResidualReport:
    """[G^k - G^c] F_k = [F^k - F^c] G_k on the grid.

    The condition holds exactly when the printed and class-conjugation forms
    of a(k) coincide; the k-th Vekua equation then reduces to
    phi_k F + psi_k G = 0, which is checked on ``samples`` (F and G are
    always included). When the condition fails the report only confirms
    that the two forms of a(k) really differ; ``detail["holds"]`` carries
    the verdict.
    """
    started = time.perf_counter()
    tol = VEKUA_TOL if tol is None else tol
    F, G = p.F, p.G
    Fk, Gk = d_omega_dagger(F, k), d_omega_dagger(G, k)
    lhs = mul(sub(conjugate_expr(G, k), p.conj(G)), Fk)
    rhs = mul(sub(conjugate_expr(F, k), p.conj(F)), Gk)
    lv, rv = sample(lhs, p.domain).values, sample(rhs, p.domain).values
    condition, mean, _ = max_residual(lv - rv, lv, rv)
    consistent = char_coeffs(p)
    printed = char_coeffs(p, printed=True)
    av, pv = sample(consistent.a[k], p.domain).values, sample(printed.a[k], p.domain).values
    coefficient_gap = max_residual(av - pv, av, pv)[0]
    holds = condition <= tol
    detail: Dict[str, object] = {"k": k, "pair": p.name, "holds": holds,
                                 "condition_residual": condition, "coefficient_gap": coefficient_gap}
    if holds:
        gaps = []
        for w in (F, G) + tuple(samples):
            d = decompose(w, p)
            reduced = add(mul(d_omega_dagger(d.phi_expr, k), F), mul(d_omega_dagger(d.psi_expr, k), G))
            full = sample(vekua_expr(w, p, k, printed), p.domain).values
            part = sample(reduced, p.domain).values
            gaps.append(max_residual(full - part, full, part)[0])
        detail["equivalence_gap"] = max(gaps)
        worst = max(condition, coefficient_gap, max(gaps))
    else:
        worst = 0.0 if coefficient_gap > tol else 1.0
    return ResidualReport.measured(f"reduction condition k={k} ({p.cls.value})", p.domain.metadata(),
                                   (worst, mean), tol, started, detail)


def limit_derivative(w: Expr, p: GeneratingPair, omega0: Bicomplex, step: float = 1e-4,
                     direction: Bicomplex = Bicomplex(1.0, 0.3, 0.2, 0.1),
                     tol: float = LIMIT_TOL) -> ResidualReport:
    """Difference quotient (w - lambda0 F - mu0 G)(omega) / (omega - omega0) against w'(omega0).

    The increment runs along an invertible direction; the symmetric average
    of the quotients at +step and -step is compared.
    """
    started = time.perf_counter()
    if direction.is_null_cone():
        raise ValueError("the increment direction lies in the null cone")
    d = decompose(w, p)

    def at(point: Bicomplex) -> Dict[str, Bicomplex]:
        z1, z2 = complex(point.z1), complex(point.z2)
        return {"z1": Bicomplex.coerce(z1), "z2": Bicomplex.coerce(z2),
                "cz1": Bicomplex.coerce(z1.conjugate()), "cz2": Bicomplex.coerce(z2.conjugate())}

    env0 = at(omega0)
    lam, mu = evaluate(d.phi_expr, env0), evaluate(d.psi_expr, env0)
    exact = evaluate(fg_derivative(w, p), env0)

    def quotient(h: float) -> Bicomplex:
        delta = direction.scale(h)
        env = at(omega0 + delta)
        numerator = evaluate(w, env) - lam * evaluate(p.F, env) - mu * evaluate(p.G, env)
        return numerator / delta

    forward, backward = quotient(step), quotient(-step)
    symmetric = (forward + backward).scale(0.5)
    one_sided = float((forward - exact).norm()) / max(1.0, float(exact.norm()))
    worst = float((symmetric - exact).norm()) / max(1.0, float(exact.norm()))
    return ResidualReport.measured(
        f"(F,G)-derivative as a limit of difference quotients ({p.cls.value})", None, (worst, worst), tol, started,
        {"omega0": str(omega0), "step": step, "one_sided_error": one_sided, "pair": p.name},
    )


# ----------------------------------------------------------------------
# The pi correspondence R1 <-> R2
# ----------------------------------------------------------------------

def pi_expr(e: Expr) -> Expr:
    """pi applied to the values of ``e``: pi(w) = (w + w^3)/2 - j (w - w^3)/2."""
    c3 = conjugate_expr(e, Conjugation.D3)
    half = const(0.5)
    return sub(mul(half, add(e, c3)), mul(Const(J.scale(0.5)), sub(e, c3)))


def pi_transport(e: Expr) -> Expr:
    """pi o e o pi as an expression in z1, z2, cz1, cz2.

    pi(omega) has z1-view x + i1 p and z2-view y + i1 q.
    """
    mapping = {
        "z1": add(X, mul(UNIT_I1, P)),
        "z2": add(Y, mul(UNIT_I1, Q)),
        "cz1": sub(X, mul(UNIT_I1, P)),
        "cz2": sub(Y, mul(UNIT_I1, Q)),
    }
    return pi_expr(substitute(e, mapping))


def transport_pair(p: GeneratingPair) -> GeneratingPair:
    if p.cls is not PairClass.R1:
        raise ValueError("the pi correspondence starts from an R1 pair")
    return GeneratingPair(pi_transport(p.F), pi_transport(p.G), PairClass.R2, p.domain, f"pi({p.name})")


def pi_correspondence(w: Expr, p: GeneratingPair, grid: Optional[GridDomain] = None,
                      tol: Optional[float] = None) -> ResidualReport:
    """(pi o w o pi)' for the transported R2 pair equals pi o w' o pi."""
    started = time.perf_counter()
    tol = TRANSPORT_TOL if tol is None else tol
    if grid is not None:
        p = GeneratingPair(p.F, p.G, p.cls, grid, p.name)
    q = transport_pair(p)
    validity = validate_pair(q)
    transported = sample(fg_derivative(pi_transport(w), q), q.domain).values
    expected = sample(pi_transport(fg_derivative(w, p)), q.domain).values
    worst, mean, _ = max_residual(transported - expected, transported, expected)
    return ResidualReport.measured(
        "pi transports (F,G)_i1-derivatives to (piFpi, piGpi)_i2-derivatives", q.domain.metadata(),
        (worst, mean), tol, started,
        {"pair": p.name, "transported_min_measure": validity.detail["min_measure"]},
    )


# ----------------------------------------------------------------------
# Idempotent (e) pairs and the splitting of R3 pseudoanalytic functions
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class PlanarPair:
    F: Expr
    G: Expr
    domain: GridDomain


def _bar(e: Expr) -> Expr:
    return conjugate_expr(e, Conjugation.D1)


def planar_measure(pair: PlanarPair) -> Tuple[float, int]:
    """min |Im(conj(F) G)| / max(1, |F||G|) over the planar grid."""
    env = pair.domain.env()
    f, g = evaluate(pair.F, env), evaluate(pair.G, env)
    im = np.atleast_1d(np.abs(np.imag(np.conj(f.z1) * g.z1)))
    scale = np.maximum(1.0, np.atleast_1d(np.abs(f.z1) * np.abs(g.z1)))
    im = np.broadcast_to(im / scale, (pair.domain.size,))
    k = int(np.argmin(im))
    return float(im[k]), k


def planar_coefficients(pair: PlanarPair) -> Tuple[Expr, Expr, Expr, Expr]:
    """Classical characteristic coefficients (a, b, A, B) of a planar pair."""
    F, G = pair.F, pair.G
    Fb, Gb = _bar(F), _bar(G)
    den = sub(mul(F, Gb), mul(Fb, G))
    Fz, Gz = differentiate(F, "z1"), differentiate(G, "z1")
    Fzb, Gzb = differentiate(F, "cz1"), differentiate(G, "cz1")
    a = neg(div(sub(mul(Fb, Gzb), mul(Fzb, Gb)), den))
    b = div(sub(mul(F, Gzb), mul(Fzb, G)), den)
    A = neg(div(sub(mul(Fb, Gz), mul(Fz, Gb)), den))
    B = div(sub(mul(F, Gz), mul(Fz, G)), den)
    return a, b, A, B


def planar_vekua_expr(w: Expr, pair: PlanarPair) -> Expr:
    a, b, _, _ = planar_coefficients(pair)
    return sub(sub(differentiate(w, "cz1"), mul(a, w)), mul(b, _bar(w)))


def planar_derivative(w: Expr, pair: PlanarPair) -> Expr:
    _, _, A, B = planar_coefficients(pair)
    return sub(sub(differentiate(w, "z1"), mul(A, w)), mul(B, _bar(w)))


def planar_vekua_residual(w: Expr, Fe: Expr, Ge: Expr, grid: GridDomain,
                          tol: Optional[float] = None) -> ResidualReport:
    """Classical w_zbar = a w + b conj(w) for the planar pair (Fe, Ge)."""
    started = time.perf_counter()
    tol = VEKUA_TOL if tol is None else tol
    pair = PlanarPair(Fe, Ge, grid)
    residual = sample(planar_vekua_expr(w, pair), grid).values
    scale = sample(w, grid).values
    worst, mean, _ = max_residual(residual, scale)
    return ResidualReport.measured("classical Vekua equation w_zbar = a w + b conj(w)", grid.metadata(),
                                   (worst, mean), tol, started)


def build_e_pair(Fe1: Expr, Ge1: Expr, Fe2: Expr, Ge2: Expr, D1: GridDomain, D2: GridDomain,
                 name: str = "") -> GeneratingPair:
    """F = Fe1(z1 - z2 i1) e1 + Fe2(z1 + z2 i1) e2, likewise G, on D1 x_e D2."""
    for label, pair in (("e1", PlanarPair(Fe1, Ge1, D1)), ("e2", PlanarPair(Fe2, Ge2, D2))):
        measure, k = planar_measure(pair)
        if measure < NONDEGENERACY_FLOOR:
            logger.warning("Degenerate planar pair | name=%s | component=%s | index=%d", name, label, k)
            raise DegeneratePair(f"planar {label}", k, measure)
    F = idempotent_construction(Fe1, Fe2)
    G = idempotent_construction(Ge1, Ge2)
    pair = GeneratingPair(F, G, PairClass.R3, e_product(D1, D2), name)
    validate_pair(pair)
    return pair


_ON_AXIS = {"z2": ZERO, "cz2": ZERO}


def p1_expr(e: Expr) -> Expr:
    """First idempotent component z1(e) - i1 z2(e) as a C(i1)-valued expression."""
    return sub(sc_expr(e, Axis.I1), mul(UNIT_I1, vec_expr(e, Axis.I1)))


def p2_expr(e: Expr) -> Expr:
    return add(sc_expr(e, Axis.I1), mul(UNIT_I1, vec_expr(e, Axis.I1)))


def split_components(w: Expr) -> Tuple[Expr, Expr]:
    """(we1, we2) as planar expressions in z1, cz1: the components of w at omega = z1."""
    return substitute(p1_expr(w), _ON_AXIS), substitute(p2_expr(w), _ON_AXIS)


def idempotent_split_check(w: Expr, p: GeneratingPair, planar: Tuple[PlanarPair, PlanarPair],
                           tol: Optional[float] = None) -> ResidualReport:
    """An R3 pseudoanalytic w splits into planar pseudoanalytic components.

    Checks, on the product grid and the two planar grids: the recombination
    of (we1, we2) reproduces w; each component solves its classical Vekua
    equation; w' recombines from the planar derivatives; the e1 part of the
    bicomplex k=3 residual is the transported planar residual of we1.
    """
    started = time.perf_counter()
    tol = VEKUA_TOL if tol is None else tol
    first, second = planar
    we1, we2 = split_components(w)
    grid = p.domain
    target = sample(w, grid).values
    rebuilt = sample(idempotent_construction(we1, we2), grid).values
    recombination = max_residual(rebuilt - target, target)[0]
    planar_1 = planar_vekua_residual(we1, first.F, first.G, first.domain, tol)
    planar_2 = planar_vekua_residual(we2, second.F, second.G, second.domain, tol)
    coeffs = char_coeffs(p)
    bicomplex_vekua = vekua_residual(w, p, 3, tol, coeffs)
    derivative = sample(fg_derivative(w, p, coeffs), grid).values
    recombined = sample(idempotent_construction(planar_derivative(we1, first), planar_derivative(we2, second)),
                        grid).values
    derivative_gap = max_residual(derivative - recombined, derivative, recombined)[0]
    e1_part = sample(p1_expr(vekua_expr(w, p, 3, coeffs)), grid).values
    transported = sample(transport_to_p1(planar_vekua_expr(we1, first)), grid).values
    transport_gap = max_residual(e1_part - transported, target)[0]
    parts = {
        "recombination": recombination,
        "planar_e1": planar_1.max_residual,
        "planar_e2": planar_2.max_residual,
        "vekua_k3": bicomplex_vekua.max_residual,
        "derivative_recombination": derivative_gap,
        "e1_transport": transport_gap,
    }
    worst = max(v if v is not None else float("inf") for v in parts.values())
    return ResidualReport.measured("R3 pseudoanalytic functions split into planar components",
                                   grid.metadata(), (worst, worst), tol, started,
                                   {"pair": p.name, "parts": parts})


def e_pair_from_entry(entry, D1: GridDomain, D2: GridDomain, parse) -> Tuple[GeneratingPair, Tuple[PlanarPair, PlanarPair]]:
    Fe1, Ge1, Fe2, Ge2 = (parse(s) for s in (entry.Fe1, entry.Ge1, entry.Fe2, entry.Ge2))
    pair = build_e_pair(Fe1, Ge1, Fe2, Ge2, D1, D2, entry.name)
    return pair, (PlanarPair(Fe1, Ge1, D1), PlanarPair(Fe2, Ge2, D2))


def e_pair_im_lemma(pair: GeneratingPair, planar: Tuple[PlanarPair, PlanarPair]) -> ResidualReport:
    """Nonvanishing Im(conj(Fe) Ge) in both planes makes Vec(F^3 G) invertible on the product."""
    started = time.perf_counter()
    m1, _ = planar_measure(planar[0])
    m2, _ = planar_measure(planar[1])
    report = validate_pair(pair)
    return report.model_copy(update={
        "anchor": "planar Im conditions give an invertible Vec(F^3 G)",
        "detail": {**report.detail, "planar_measures": [m1, m2]},
        "wall_time": round(time.perf_counter() - started, 6),
    })


def combination(p: GeneratingPair, alpha: Bicomplex, beta: Bicomplex) -> Expr:
    """alpha F + beta G for constants alpha, beta in the class subalgebra."""
    return add(mul(Const(alpha), p.F), mul(Const(beta), p.G))


def random_subalgebra(rng: np.random.Generator, cls: PairClass) -> Bicomplex:
    a, b = (float(v) for v in rng.standard_normal(2))
    if cls is PairClass.R1:
        return Bicomplex(a, b)
    if cls is PairClass.R2:
        return Bicomplex(a, 0.0, b)
    return Bicomplex(a, 0.0, 0.0, b)


__all__ = [
    "PairClass", "GeneratingPair", "CharCoefficients", "Decomposition", "PlanarPair",
    "validate_pair", "vec_determinant_check", "decompose", "decomposition_report", "char_coeffs",
    "denominator_identity", "fg_derivative", "fg_derivative_by_parts", "determinant_derivative",
    "fg_derivative_agreement", "vekua_residual", "reduction_condition", "limit_derivative",
    "pi_expr", "pi_transport", "transport_pair", "pi_correspondence", "planar_vekua_residual",
    "build_e_pair", "split_components", "idempotent_split_check", "combination", "random_subalgebra",
]
