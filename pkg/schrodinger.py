"""Complexified Schrödinger operators factored through bicomplex Vekua equations.

Starting from a particular solution f0 of (Delta_C - nu) f = 0 that does not
vanish on the grid:

    nu   = Delta_C f0 / f0
    (Delta_C - nu) phi = 4 (d_omega_dagger2 + q C)(d_omega - q C) phi,  q = d_omega f0 / f0
    main Vekua equation  W_{omega dagger2} = b W^dagger2,  b = d_omega_dagger2 f0 / f0
    eta  = -nu + 2 |grad_C f0|^2_i1 / f0^2

C is the dagger2 conjugation. For a solution W = u + v i2 (u, v C(i1)-valued)
u solves (Delta_C - nu) u = 0 and v solves (Delta_C - eta) v = 0.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Dict, Optional, Sequence

import numpy as np

from bicomplex import MEMBERSHIP_FLOOR, Axis, Bicomplex, Conjugation
from calculus import (
    EXACT_TOL,
    d_omega,
    d_omega_dagger,
    gradient_c,
    laplacian_c,
    plane_extension,
    plane_reduction_residual,
    real_partial,
)
from config import F0_FLOOR
from errors import ConfigError, NotComplexValued, NotVekuaSolution, VanishingF0
from expressions import (
    UNIT_I2,
    Const,
    Expr,
    add,
    const,
    conjugate_expr,
    div,
    modulus_sq_expr,
    mul,
    neg,
    sc_expr,
    sub,
    vec_expr,
)
from grid import GridDomain, Plane, max_residual, restrict_plane, sample
from pseudoanalytic import GeneratingPair, PairClass, char_coeffs, membership_residual, validate_pair
from schemas import ResidualReport

logger = logging.getLogger("bvk.schrodinger")

FACTOR_TOL = 1e-11
# Every "f^2_2" denominator of the potential is read as f0^2.
F0_SQUARED_READING = "f0^2"


@dataclass(frozen=True)
class SchrodingerInstance:
    f0: Expr
    nu: Expr
    domain: GridDomain
    min_abs_f0: float
    name: str = ""


@dataclass(frozen=True)
class VekuaMainEquation:
    instance: SchrodingerInstance
    b: Expr
    pair: GeneratingPair
    eta: Expr

    @property
    def f0(self) -> Expr:
        return self.instance.f0

    @property
    def domain(self) -> GridDomain:
        return self.instance.domain


def _dagger2(e: Expr) -> Expr:
    return conjugate_expr(e, Conjugation.D2)


def require_complex_valued(e: Expr, grid: GridDomain, name: str, tol: float = MEMBERSHIP_FLOOR) -> float:
    """Out-of-C(i1) residual of ``e`` on the grid; raises NotComplexValued above ``tol``."""
    residual = membership_residual(sample(e, grid).values, Axis.I1)
    if residual > tol:
        logger.warning("Not C(i1)-valued | name=%s | residual=%.3e", name, residual)
        raise NotComplexValued(name, residual)
    return residual


def _nonvanishing(f0: Expr, grid: GridDomain) -> float:
    size = np.atleast_1d(np.asarray(sample(f0, grid).values.norm(), dtype=float))
    k = int(np.argmin(size))
    ratio = float(size[k] / max(float(np.max(size)), np.finfo(float).tiny))
    if ratio < F0_FLOOR:
        logger.warning("f0 nearly vanishes | index=%d | ratio=%.3e", k, ratio)
        raise VanishingF0(k, ratio)
    return float(size[k])


def nu_from_f0(f0: Expr, grid: GridDomain, name: str = "") -> SchrodingerInstance:
    """nu = Delta_C f0 / f0 for a C(i1)-valued f0 that stays away from zero."""
    require_complex_valued(f0, grid, "f0")
    smallest = _nonvanishing(f0, grid)
    nu = div(laplacian_c(f0), f0)
    require_complex_valued(nu, grid, "nu")
    logger.info("Schrodinger instance | f0=%s | min_abs_f0=%.3e | grid=%s", name or "custom", smallest, grid.describe())
    return SchrodingerInstance(f0, nu, grid, smallest, name)


def cl_residual(inst: SchrodingerInstance, tol: Optional[float] = None) -> ResidualReport:
    """(Delta_C - nu) f0 on the grid."""
    started = time.perf_counter()
    tol = FACTOR_TOL if tol is None else tol
    lhs = sample(laplacian_c(inst.f0), inst.domain).values
    rhs = sample(mul(inst.nu, inst.f0), inst.domain).values
    worst, mean, _ = max_residual(lhs - rhs, lhs, rhs)
    return ResidualReport.measured("f0 solves (Delta_C - nu) f = 0", inst.domain.metadata(), (worst, mean), tol, started,
                                   {"f0": inst.name, "min_abs_f0": inst.min_abs_f0})


# ----------------------------------------------------------------------
# Factorization
# ----------------------------------------------------------------------

def right_factor(inst: SchrodingerInstance, phi: Expr) -> Expr:
    """(d_omega - q C) phi with q = d_omega f0 / f0."""
    q = div(d_omega(inst.f0), inst.f0)
    return sub(d_omega(phi), mul(q, _dagger2(phi)))


def factored(inst: SchrodingerInstance, phi: Expr) -> Expr:
    """4 (d_omega_dagger2 + q C)(d_omega - q C) phi."""
    q = div(d_omega(inst.f0), inst.f0)
    inner = right_factor(inst, phi)
    return mul(const(4.0), add(d_omega_dagger(inner, 2), mul(q, _dagger2(inner))))


def factorization_residual(inst: SchrodingerInstance, phi: Expr, tol: Optional[float] = None,
                           label: str = "") -> ResidualReport:
    started = time.perf_counter()
    tol = FACTOR_TOL if tol is None else tol
    require_complex_valued(phi, inst.domain, "phi")
    lhs = sample(sub(laplacian_c(phi), mul(inst.nu, phi)), inst.domain).values
    rhs = sample(factored(inst, phi), inst.domain).values
    worst, mean, _ = max_residual(lhs - rhs, lhs, rhs)
    annihilated = sample(right_factor(inst, inst.f0), inst.domain).values
    scale = sample(d_omega(inst.f0), inst.domain).values
    return ResidualReport.measured(
        "(Delta_C - nu) = 4 (d_omega_dagger2 + q C)(d_omega - q C)", inst.domain.metadata(), (worst, mean), tol, started,
        {"f0": inst.name, "phi": label, "right_factor_on_f0": max_residual(annihilated, scale)[0]},
    )


def one_dim_factorization_check(f0: Expr, phi: Expr, grid: GridDomain, tol: Optional[float] = None,
                                label: str = "") -> ResidualReport:
    """-phi'' + nu phi = (-d/dx - g)(d/dx - g) phi with g = f0'/f0 and nu = f0''/f0.

    The grid must have x as its only active axis.
    """
    started = time.perf_counter()
    tol = EXACT_TOL if tol is None else tol
    if grid.active_axes != ("x",):
        raise ConfigError(f"one-dimensional check needs x as the only active axis, got {grid.active_axes}")
    _nonvanishing(f0, grid)

    def dx(e: Expr) -> Expr:
        return real_partial(e, "x")

    nu = div(dx(dx(f0)), f0)
    g = div(dx(f0), f0)
    lhs = add(neg(dx(dx(phi))), mul(nu, phi))
    inner = sub(dx(phi), mul(g, phi))
    rhs = sub(neg(dx(inner)), mul(g, inner))
    a, b = sample(lhs, grid).values, sample(rhs, grid).values
    worst, mean, _ = max_residual(a - b, a, b)
    return ResidualReport.measured("-d2/dx2 + nu = (-d/dx - f0'/f0)(d/dx - f0'/f0)", grid.metadata(),
                                   (worst, mean), tol, started, {"phi": label})


# ----------------------------------------------------------------------
# Main Vekua equation and the transformed potential
# ----------------------------------------------------------------------

def main_vekua(inst: SchrodingerInstance) -> VekuaMainEquation:
    f0 = inst.f0
    b = div(d_omega_dagger(f0, 2), f0)
    pair = GeneratingPair(f0, div(UNIT_I2, f0), PairClass.R1, inst.domain, f"main({inst.name})")
    validate_pair(pair)
    return VekuaMainEquation(inst, b, pair, _potential(inst))


def _potential(inst: SchrodingerInstance) -> Expr:
    f0 = inst.f0
    grad = modulus_sq_expr(gradient_c(f0), Axis.I1)
    return add(neg(inst.nu), div(mul(const(2.0), grad), mul(f0, f0)))


def darboux_potential(eq: VekuaMainEquation) -> Expr:
    """eta = -nu + 2 |grad_C f0|^2_i1 / f0^2."""
    return _potential(eq.instance)


def main_vekua_expr(eq: VekuaMainEquation, W: Expr) -> Expr:
    """W_{omega dagger2} - b W^dagger2."""
    return sub(d_omega_dagger(W, 2), mul(eq.b, _dagger2(W)))


def _main_residual(eq: VekuaMainEquation, W: Expr, grid: Optional[GridDomain] = None) -> float:
    grid = grid or eq.domain
    residual = sample(main_vekua_expr(eq, W), grid).values
    return max_residual(residual, sample(W, grid).values)[0]


def main_vekua_report(eq: VekuaMainEquation, tol: Optional[float] = None) -> ResidualReport:
    """f0 and i2/f0 solve the main equation; b_omega is C(i1)-valued and equals nu/4 - |b f0|^2_i1 / f0^2.

    The same equation is the k=2 Vekua equation of the R1 pair (f0, i2/f0):
    a(2) vanishes and b(2) equals b.
    """
    started = time.perf_counter()
    tol = EXACT_TOL if tol is None else tol
    grid = eq.domain
    f0 = eq.f0
    b_omega = d_omega(eq.b)
    b_omega_values = sample(b_omega, grid).values
    proof_form = sub(div(eq.instance.nu, const(4.0)),
                     div(modulus_sq_expr(d_omega_dagger(f0, 2), Axis.I1), mul(f0, f0)))
    pv = sample(proof_form, grid).values
    identity = max_residual(b_omega_values - pv, b_omega_values, pv)[0]
    membership = membership_residual(b_omega_values, Axis.I1)
    solutions = {"f0": _main_residual(eq, eq.pair.F), "i2/f0": _main_residual(eq, eq.pair.G)}
    coeffs = char_coeffs(eq.pair)
    a2 = sample(coeffs.a[2], grid).values
    b2 = sample(coeffs.b[2], grid).values
    bv = sample(eq.b, grid).values
    class_gap = max(max_residual(a2)[0], max_residual(b2 - bv, bv)[0])
    worst = max(identity, membership, class_gap, *solutions.values())
    return ResidualReport.measured(
        "main Vekua equation W_{omega dagger2} = (d_omega_dagger2 f0 / f0) W^dagger2", grid.metadata(),
        (worst, worst), tol, started,
        {"f0": eq.instance.name, "b_omega_identity": identity, "b_omega_membership": membership,
         "generating_pair": solutions, "class_coefficient_gap": class_gap},
    )


def eta_consistency(eq: VekuaMainEquation, tol: Optional[float] = None) -> ResidualReport:
    """eta = 4(|b|^2_i1 - b_omega) and nu = 4(|b|^2_i1 + b_omega) pointwise."""
    started = time.perf_counter()
    tol = FACTOR_TOL if tol is None else tol
    grid = eq.domain
    b_sq = modulus_sq_expr(eq.b, Axis.I1)
    b_omega = d_omega(eq.b)
    gaps: Dict[str, float] = {}
    for label, lhs, rhs in (
        ("eta", eq.eta, mul(const(4.0), sub(b_sq, b_omega))),
        ("nu", eq.instance.nu, mul(const(4.0), add(b_sq, b_omega))),
        # 2 |d_omega_dagger2 f0|^2 = |grad_C f0|^2 / 2
        ("gradient", mul(const(2.0), modulus_sq_expr(d_omega_dagger(eq.f0, 2), Axis.I1)),
         mul(const(0.5), modulus_sq_expr(gradient_c(eq.f0), Axis.I1))),
    ):
        a, b = sample(lhs, grid).values, sample(rhs, grid).values
        gaps[label] = max_residual(a - b, a, b)[0]
    worst = max(gaps.values())
    return ResidualReport.measured("eta = -nu + 2 |grad_C f0|^2_i1 / f0^2 = 4(|b|^2_i1 - b_omega)", grid.metadata(),
                                   (worst, worst), tol, started,
                                   {"f0": eq.instance.name, "gaps": gaps, "denominator": F0_SQUARED_READING})


def solution_family(eq: VekuaMainEquation, alpha: Bicomplex, beta: Bicomplex) -> Expr:
    """alpha f0 + beta i2/f0 for C(i1) constants alpha, beta."""
    for name, value in (("alpha", alpha), ("beta", beta)):
        off = float(np.hypot(value.w2, value.w3))
        if off > MEMBERSHIP_FLOOR:
            raise NotComplexValued(name, off)
    return add(mul(Const(alpha), eq.pair.F), mul(Const(beta), eq.pair.G))


# ----------------------------------------------------------------------
# Splitting of solutions
# ----------------------------------------------------------------------

def lemma_residuals(W: Expr, b: Expr, grid: GridDomain, tol: Optional[float] = None) -> ResidualReport:
    """W_{omega dagger2} = b W^dagger2 implies
    Delta_C u / 4 - (|b|^2_i1 + b_omega) u = 0 and Delta_C v / 4 - (|b|^2_i1 - b_omega) v = 0
    for u = Sc W, v = Vec W, provided b_omega is C(i1)-valued."""
    started = time.perf_counter()
    tol = FACTOR_TOL if tol is None else tol
    u, v = sc_expr(W, Axis.I1), vec_expr(W, Axis.I1)
    b_sq = modulus_sq_expr(b, Axis.I1)
    b_omega = d_omega(b)
    quarter = const(0.25)
    parts: Dict[str, float] = {}
    for label, f, potential in (("u", u, add(b_sq, b_omega)), ("v", v, sub(b_sq, b_omega))):
        lhs = sample(mul(quarter, laplacian_c(f)), grid).values
        rhs = sample(mul(potential, f), grid).values
        parts[label] = max_residual(lhs - rhs, lhs, rhs)[0]
    vekua = sample(sub(d_omega_dagger(W, 2), mul(b, _dagger2(W))), grid).values
    detail = {
        "parts": parts,
        "vekua_residual": max_residual(vekua, sample(W, grid).values)[0],
        "b_omega_membership": membership_residual(sample(b_omega, grid).values, Axis.I1),
    }
    worst = max(parts.values())
    return ResidualReport.measured("Sc and Vec of a main Vekua solution solve the b-dependent equations",
                                   grid.metadata(), (worst, worst), tol, started, detail)


def split_check(eq: VekuaMainEquation, W: Expr, tol: Optional[float] = None, label: str = "",
                grid: Optional[GridDomain] = None) -> ResidualReport:
    """(i) W solves the main equation, (ii) (Delta_C - nu) Sc W = 0, (iii) (Delta_C - eta) Vec W = 0.

    When (i) fails the report carries a NotVekuaSolution error and (ii), (iii)
    stay in ``detail`` as advisory values.
    """
    started = time.perf_counter()
    tol = FACTOR_TOL if tol is None else tol
    grid = grid or eq.domain
    u, v = sc_expr(W, Axis.I1), vec_expr(W, Axis.I1)
    vekua = _main_residual(eq, W, grid)
    parts: Dict[str, float] = {"vekua": vekua}
    for name, f, potential in (("u", u, eq.instance.nu), ("v", v, eq.eta)):
        lhs = sample(laplacian_c(f), grid).values
        rhs = sample(mul(potential, f), grid).values
        parts[name] = max_residual(lhs - rhs, lhs, rhs)[0]
    lemma = lemma_residuals(W, eq.b, grid, tol)
    worst = max(parts.values())
    report = ResidualReport.measured(
        "Sc W solves (Delta_C - nu) u = 0 and Vec W solves (Delta_C - eta) v = 0", grid.metadata(),
        (worst, worst), tol, started,
        {"f0": eq.instance.name, "W": label, "parts": parts, "lemma": lemma.max_residual,
         "denominator": F0_SQUARED_READING},
    )
    if vekua > tol:
        error = NotVekuaSolution(vekua, tol)
        logger.warning("Split check on a non-solution | W=%s | residual=%.3e", label, vekua)
        report = report.model_copy(update={"error": str(error), "detail": {**report.detail, "advisory": True}})
    return report


# ----------------------------------------------------------------------
# Restriction to the planes C(i2) and D
# ----------------------------------------------------------------------

def _plane_operator(e: Expr, plane: Plane) -> Expr:
    """dxx + dpp on C(i2), dxx - dqq on D, applied to the full expression."""
    xx = real_partial(real_partial(e, "x"), "x")
    if plane is Plane.C_I2:
        return add(xx, real_partial(real_partial(e, "p"), "p"))
    return sub(xx, real_partial(real_partial(e, "q"), "q"))


def specialize(inst: SchrodingerInstance, plane: Plane | str, phis: Sequence[Expr] = (),
               alpha: Bicomplex = Bicomplex(1.0, 0.5), beta: Bicomplex = Bicomplex(-0.25, 1.0),
               tol: Optional[float] = None) -> ResidualReport:
    """On C(i2) the factorization becomes the two-dimensional Schrödinger one
    (Delta - nu(x, p)); on D it becomes the Klein-Gordon one (box - nu(x, q)).

    The classical operator is applied to the original expressions on the
    plane and compared with the factored form of their holomorphic
    extensions; the split check is re-run on the restricted grid.
    """
    started = time.perf_counter()
    tol = FACTOR_TOL if tol is None else tol
    plane = plane if isinstance(plane, Plane) else Plane.parse(plane)
    grid = restrict_plane(inst.domain, plane)
    extended = nu_from_f0(plane_extension(inst.f0, plane), grid, f"{inst.name}@{plane.value}")
    nu_classical = div(_plane_operator(inst.f0, plane), inst.f0)
    parts: Dict[str, float] = {}
    a = sample(nu_classical, grid).values
    b = sample(extended.nu, grid).values
    parts["nu"] = max_residual(a - b, a, b)[0]
    for k, phi in enumerate(phis):
        lhs = sample(sub(_plane_operator(phi, plane), mul(nu_classical, phi)), grid).values
        rhs = sample(factored(extended, plane_extension(phi, plane)), grid).values
        parts[f"phi{k}"] = max_residual(lhs - rhs, lhs, rhs)[0]
    eq = main_vekua(extended)
    split = split_check(eq, solution_family(eq, alpha, beta), tol, "alpha f0 + beta i2/f0")
    parts["split"] = split.max_residual if split.max_residual is not None else float("inf")
    values = sample(inst.f0, grid).values
    imaginary = float(np.max(np.abs(np.atleast_1d(values.w1)) / np.maximum(1.0, np.atleast_1d(values.norm()))))
    fd = plane_reduction_residual(inst.f0, inst.domain, plane)
    worst = max(parts.values())
    operator = "two-dimensional Schrödinger" if plane is Plane.C_I2 else "Klein-Gordon"
    return ResidualReport.measured(
        f"factorization restricted to {plane.value} is the {operator} factorization", grid.metadata(),
        (worst, worst), tol, started,
        {"f0": inst.name, "plane": plane.value, "parts": parts, "f0_imaginary_part": imaginary,
         "f0_real_on_plane": imaginary <= MEMBERSHIP_FLOOR, "fd_reduction_residual": fd.max_residual},
    )
