"""Bicomplex differential operators and the calculus checks built on them.

With omega = z1 + z2*i2:

    d_omega          = (d_z1  - i2 d_z2) / 2
    d_omega_dagger2  = (d_z1  + i2 d_z2) / 2
    d_omega_dagger1  = (d_cz1 - i2 d_cz2) / 2
    d_omega_dagger3  = (d_cz1 + i2 d_cz2) / 2

Every check evaluates exact symbolic derivatives on a grid; finite
differences appear only as an independent oracle.
"""

from __future__ import annotations

import logging
import time
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from bicomplex import E1, E2, I1, Axis, Bicomplex
from expressions import (
    CZ1,
    CZ2,
    HALF,
    UNIT_I1,
    UNIT_I2,
    Z1,
    Z2,
    Const,
    Expr,
    add,
    const,
    differentiate,
    mul,
    neg,
    sc_expr,
    sub,
    substitute,
    vec_expr,
)
from errors import ConfigError
from grid import (
    Chart,
    SECOND_STEP,
    FIRST_STEP,
    GridDomain,
    Plane,
    first_difference,
    max_residual,
    mixed_difference,
    restrict_plane,
    sample,
    sampler,
    second_difference,
)
from schemas import ResidualReport

logger = logging.getLogger("bvk.calculus")

EXACT_TOL = 1e-12
VERDICT_TOL = 1e-10
FD_TOL = 1e-5
PLANE_TOL = 1e-8
ORDER_SPREAD = 0.15


class WirtingerOp(str, Enum):
    OMEGA = "d_omega"
    DAGGER1 = "d_omega_dagger1"
    DAGGER2 = "d_omega_dagger2"
    DAGGER3 = "d_omega_dagger3"


# (first variable, second variable, sign in front of i2)
_OPERATORS = {
    WirtingerOp.OMEGA: ("z1", "z2", -1.0),
    WirtingerOp.DAGGER2: ("z1", "z2", 1.0),
    WirtingerOp.DAGGER1: ("cz1", "cz2", -1.0),
    WirtingerOp.DAGGER3: ("cz1", "cz2", 1.0),
}

DAGGER_OPS = (WirtingerOp.DAGGER1, WirtingerOp.DAGGER2, WirtingerOp.DAGGER3)


def wirtinger_apply(e: Expr, op: WirtingerOp | str) -> Expr:
    first, second, sign = _OPERATORS[WirtingerOp(op)]
    return mul(HALF, add(differentiate(e, first), mul(Const(Bicomplex(0.0, 0.0, sign)), differentiate(e, second))))


def d_omega(e: Expr) -> Expr:
    return wirtinger_apply(e, WirtingerOp.OMEGA)


def d_omega_dagger(e: Expr, k: int) -> Expr:
    return wirtinger_apply(e, {1: WirtingerOp.DAGGER1, 2: WirtingerOp.DAGGER2, 3: WirtingerOp.DAGGER3}[k])


def laplacian_c(e: Expr) -> Expr:
    """Complex Laplacian d^2_z1 + d^2_z2."""
    return add(differentiate(differentiate(e, "z1"), "z1"), differentiate(differentiate(e, "z2"), "z2"))


def gradient_c(e: Expr) -> Expr:
    """d_z1 + i2 d_z2."""
    return add(differentiate(e, "z1"), mul(UNIT_I2, differentiate(e, "z2")))


def components(e: Expr) -> Tuple[Expr, Expr]:
    """(f1, f2) with f = f1 + f2*i2 and f1, f2 C(i1)-valued."""
    return sc_expr(e, Axis.I1), vec_expr(e, Axis.I1)


def t_derivative(e: Expr) -> Expr:
    """f' = d f1/d z1 + (d f2/d z1) i2."""
    f1, f2 = components(e)
    return add(differentiate(f1, "z1"), mul(differentiate(f2, "z1"), UNIT_I2))


def real_partial(e: Expr, axis: str) -> Expr:
    """d/dx, d/dy, d/dp or d/dq through the chain rule on the Wirtinger variables."""
    var, cvar = ("z1", "cz1") if axis in ("x", "y") else ("z2", "cz2")
    dz, dcz = differentiate(e, var), differentiate(e, cvar)
    if axis in ("x", "p"):
        return add(dz, dcz)
    return mul(UNIT_I1, sub(dz, dcz))


def _require_cartesian(grid: GridDomain) -> None:
    if grid.chart is not Chart.CARTESIAN:
        raise ConfigError("finite differences along x, y, p, q need the cartesian chart")


def _values(e: Expr, grid: GridDomain) -> Bicomplex:
    return sample(e, grid).values


def _compare(lhs: Expr, rhs: Expr, grid: GridDomain) -> Tuple[float, float, int]:
    a, b = _values(lhs, grid), _values(rhs, grid)
    return max_residual(a - b, a, b)


def _where(grid: GridDomain, index: int) -> Dict[str, float]:
    coords = grid.coordinates()
    return {n: float(coords[n][index]) for n in coords}


# ----------------------------------------------------------------------
# Residual checks
# ----------------------------------------------------------------------

def laplacian_factorization_residual(e: Expr, grid: GridDomain, tol: Optional[float] = None) -> ResidualReport:
    """Delta_C e against 4 d_omega d_omega_dagger2 e, both exact."""
    started = time.perf_counter()
    tol = EXACT_TOL if tol is None else tol
    lhs = laplacian_c(e)
    rhs = mul(const(4.0), d_omega(d_omega_dagger(e, 2)))
    worst, mean, k = _compare(lhs, rhs, grid)
    return ResidualReport.measured(
        "complex Laplacian equals 4 d_omega d_omega_dagger2", grid.metadata(), (worst, mean), tol, started,
        {"argmax": _where(grid, k)},
    )


def real_expansion_residual(e: Expr, grid: GridDomain, h: Optional[float] = None,
                            tol: Optional[float] = None) -> ResidualReport:
    """4 Delta_C e against the real second partials taken by central differences.

    4 Delta_C = (dxx - dyy + dpp - dqq) - 2 i1 (dxy + dpq).
    """
    _require_cartesian(grid)
    started = time.perf_counter()
    tol = FD_TOL if tol is None else tol
    h = SECOND_STEP * grid.scale() if h is None else h
    exact = _values(mul(const(4.0), laplacian_c(e)), grid)
    estimate = _real_expansion_fd(e, grid, h)
    worst, mean, k = max_residual(exact - estimate, exact)
    return ResidualReport.measured(
        "4 Delta_C as real second partials", grid.metadata(), (worst, mean), tol, started,
        {"h": h, "argmax": _where(grid, k)},
    )


def _real_expansion_fd(e: Expr, grid: GridDomain, h: float) -> Bicomplex:
    f = sampler(e, grid.chart)
    coords = grid.coordinates()
    d2 = {axis: second_difference(f, coords, axis, h) for axis in ("x", "y", "p", "q")}
    mixed = mixed_difference(f, coords, "x", "y", h) + mixed_difference(f, coords, "p", "q", h)
    return d2["x"] - d2["y"] + d2["p"] - d2["q"] - I1.scale(2.0) * mixed


def fd_order_sweep(e: Expr, grid: GridDomain, refinements: int = 3, h0: Optional[float] = None,
                   tol: float = ORDER_SPREAD, order: float = 2.0, at_least: bool = False) -> ResidualReport:
    """Observed order of the real-expansion error under h -> h/2.

    The residual is the largest relative gap between an observed order and
    ``order``; with ``at_least`` only orders below ``order`` count. An error
    already at rounding level, or one that does not shrink between two steps,
    has no observable order and the case fails.
    """
    _require_cartesian(grid)
    started = time.perf_counter()
    anchor = f"order-{order:g} convergence of the real expansion"
    h0 = 0.1 * grid.scale() if h0 is None else h0
    exact = _values(mul(const(4.0), laplacian_c(e)), grid)
    steps = [h0 / 2 ** i for i in range(refinements + 1)]
    errors = [float(np.max(np.asarray((exact - _real_expansion_fd(e, grid, h)).norm()))) for h in steps]
    ratios = [errors[i] / errors[i + 1] if errors[i + 1] > 0 else float("inf") for i in range(refinements)]
    observed = [float(np.log2(r)) if np.isfinite(r) and r > 1.0 else None for r in ratios]
    floor = 1e-9 * max(1.0, float(np.max(np.asarray(exact.norm()))))
    rounding = max(errors) <= floor
    detail = {
        "steps": steps,
        "errors": errors,
        "ratios": [r if np.isfinite(r) else None for r in ratios],
        "observed_order": observed,
        "expected_order": order,
        "at_least": at_least,
        "rounding_level": bool(rounding),
    }
    logger.debug("Order sweep | ratios=%s", detail["ratios"])
    if rounding or None in observed:
        reason = "error at rounding level" if rounding else "error does not shrink under refinement"
        return ResidualReport.failed(anchor, tol, f"{reason}; order not observable", started, grid.metadata(), detail)
    if at_least:
        gap = max(max(0.0, order - o) / order for o in observed)
    else:
        gap = max(abs(o - order) / order for o in observed)
    return ResidualReport.measured(anchor, grid.metadata(), (gap, gap), tol, started, detail)


def fd_first_derivative_check(e: Expr, grid: GridDomain, tol: Optional[float] = None) -> ResidualReport:
    """Exact real partials against central first differences on all four axes."""
    _require_cartesian(grid)
    started = time.perf_counter()
    tol = 1e-7 if tol is None else tol
    h = FIRST_STEP * grid.scale()
    f = sampler(e, grid.chart)
    coords = grid.coordinates()
    worst, mean = 0.0, 0.0
    for axis in grid.active_axes:
        exact = _values(real_partial(e, axis), grid)
        estimate = first_difference(f, coords, axis, h)
        w, m, _ = max_residual(exact - estimate, exact)
        worst, mean = max(worst, w), max(mean, m)
    return ResidualReport.measured(
        "exact partials against central differences", grid.metadata(), (worst, mean), tol, started, {"h": h},
    )


def _cr_systems(e: Expr) -> Dict[str, List[Expr]]:
    """Component systems equivalent to the vanishing of each dagger derivative."""
    f1, f2 = components(e)
    d = {(f, v): differentiate(g, v) for f, g in (("f1", f1), ("f2", f2)) for v in ("z1", "z2", "cz1", "cz2")}
    return {
        "dagger2": [sub(d["f1", "z1"], d["f2", "z2"]), add(d["f1", "z2"], d["f2", "z1"])],
        "dagger1": [add(d["f1", "cz1"], d["f2", "cz2"]), sub(d["f2", "cz1"], d["f1", "cz2"])],
        "dagger3": [sub(d["f1", "cz1"], d["f2", "cz2"]), add(d["f2", "cz1"], d["f1", "cz2"])],
        "antiholomorphic": [d["f1", "cz1"], d["f1", "cz2"], d["f2", "cz1"], d["f2", "cz2"]],
    }


def _scaled_max(values: Sequence[Expr], grid: GridDomain, reference: Bicomplex) -> float:
    return max(max_residual(_values(v, grid), reference)[0] for v in values)


def check_t_holomorphic(e: Expr, grid: GridDomain, tol: Optional[float] = None) -> ResidualReport:
    """Components holomorphic in (z1, z2) plus the complexified Cauchy-Riemann equations."""
    started = time.perf_counter()
    tol = VERDICT_TOL if tol is None else tol
    f1, f2 = components(e)
    reference = _values(e, grid)
    systems = _cr_systems(e)
    zbar = _scaled_max(systems["antiholomorphic"], grid, reference)
    cr = _scaled_max(systems["dagger2"], grid, reference)
    det = sub(
        mul(differentiate(f1, "z1"), differentiate(f2, "z2")),
        mul(differentiate(f1, "z2"), differentiate(f2, "z1")),
    )
    min_det = float(np.min(np.atleast_1d(np.asarray(_values(det, grid).norm()))))
    worst = max(zbar, cr)
    return ResidualReport.measured(
        "T-holomorphy: holomorphic components and complexified Cauchy-Riemann", grid.metadata(),
        (worst, worst), tol, started,
        {"antiholomorphic_residual": zbar, "cauchy_riemann_residual": cr, "min_abs_det_jacobian": min_det},
    )


def dagger_derivative_criterion(e: Expr, grid: GridDomain, tol: Optional[float] = None) -> ResidualReport:
    """The derivative exists iff the three dagger derivatives vanish.

    The residual counts disagreements with check_t_holomorphic (0 or 1).
    """
    started = time.perf_counter()
    tol = VERDICT_TOL if tol is None else tol
    reference = _values(e, grid)
    dagger = {op.value: max_residual(_values(wirtinger_apply(e, op), grid), reference)[0] for op in DAGGER_OPS}
    exists = all(v <= tol for v in dagger.values())
    holomorphic = check_t_holomorphic(e, grid, tol)
    systems = _cr_systems(e)
    detail = {
        "dagger_residuals": dagger,
        "derivative_exists": exists,
        "t_holomorphic": holomorphic.passed,
        "component_systems": {k: _scaled_max(systems[k], grid, reference) for k in ("dagger1", "dagger2", "dagger3")},
    }
    disagreement = float(exists != holomorphic.passed)
    if disagreement:
        logger.warning("Holomorphy verdicts disagree | dagger=%s | cr=%s", exists, holomorphic.passed)
    return ResidualReport.measured(
        "derivative exists iff the three dagger derivatives vanish", grid.metadata(),
        (disagreement, disagreement), 0.0, started, detail,
    )


def product_rule_residual(a: Expr, b: Expr, op: WirtingerOp | str, grid: GridDomain,
                          tol: Optional[float] = None) -> ResidualReport:
    started = time.perf_counter()
    tol = EXACT_TOL if tol is None else tol
    lhs = wirtinger_apply(mul(a, b), op)
    rhs = add(mul(a, wirtinger_apply(b, op)), mul(b, wirtinger_apply(a, op)))
    worst, mean, _ = _compare(lhs, rhs, grid)
    return ResidualReport.measured(f"product rule for {WirtingerOp(op).value}", grid.metadata(),
                                   (worst, mean), tol, started)


def linearity_residual(a: Expr, b: Expr, alpha: Bicomplex, beta: Bicomplex, op: WirtingerOp | str,
                       grid: GridDomain, tol: Optional[float] = None) -> ResidualReport:
    started = time.perf_counter()
    tol = EXACT_TOL if tol is None else tol
    lhs = wirtinger_apply(add(mul(Const(alpha), a), mul(Const(beta), b)), op)
    rhs = add(mul(Const(alpha), wirtinger_apply(a, op)), mul(Const(beta), wirtinger_apply(b, op)))
    worst, mean, _ = _compare(lhs, rhs, grid)
    return ResidualReport.measured(f"linearity of {WirtingerOp(op).value}", grid.metadata(),
                                   (worst, mean), tol, started)


# ----------------------------------------------------------------------
# Restriction planes
# ----------------------------------------------------------------------

def plane_extension(e: Expr, plane: Plane | str) -> Expr:
    """The (z1, z2)-holomorphic expression that agrees with ``e`` on the plane.

    On C(i2) both z1 and z2 are real; on D z1 is real and z2 is i1-imaginary.
    """
    plane = plane if isinstance(plane, Plane) else Plane.parse(plane)
    if plane is Plane.C_I2:
        return substitute(e, {"cz1": Z1, "cz2": Z2})
    return substitute(e, {"cz1": Z1, "cz2": neg(Z2)})


def plane_reduction_residual(e: Expr, grid: GridDomain, plane: Plane | str,
                             tol: Optional[float] = None, spacing: str = "point") -> ResidualReport:
    """Delta_C reduces to dxx + dpp on C(i2) and to the wave operator dxx - dqq on D.

    ``spacing="point"`` differences the expression with a fixed small step at
    every grid point; ``spacing="grid"`` uses the lattice spacing and is only
    exact for polynomials of degree at most three.
    """
    started = time.perf_counter()
    plane = plane if isinstance(plane, Plane) else Plane.parse(plane)
    restricted = restrict_plane(grid, plane)
    second = "p" if plane is Plane.C_I2 else "q"
    sign = 1.0 if plane is Plane.C_I2 else -1.0
    exact_expr = laplacian_c(plane_extension(e, plane))
    if spacing == "grid":
        tol = PLANE_TOL if tol is None else tol
        field = sample(e, restricted)
        estimate = field.second_difference("x") + field.second_difference(second).scale(sign)
        exact = sample(exact_expr, restricted).interior()
        step = restricted.spacing()
    elif spacing == "point":
        tol = FD_TOL if tol is None else tol
        h = SECOND_STEP * restricted.scale()
        f = sampler(e, restricted.chart)
        coords = restricted.coordinates()
        estimate = second_difference(f, coords, "x", h) + second_difference(f, coords, second, h).scale(sign)
        exact = sample(exact_expr, restricted).values
        step = {"x": h, second: h}
    else:
        raise ValueError(f"unknown spacing {spacing!r}")
    worst, mean, _ = max_residual(exact - estimate, exact)
    operator = "Laplacian dxx + dpp" if plane is Plane.C_I2 else "wave operator dxx - dqq"
    return ResidualReport.measured(
        f"Delta_C restricted to {plane.value} is the {operator}", restricted.metadata(), (worst, mean), tol, started,
        {"plane": plane.value, "spacing": spacing, "step": step},
    )


# ----------------------------------------------------------------------
# Idempotent construction
# ----------------------------------------------------------------------

def transport_to_p1(fe: Expr) -> Expr:
    """fe(z) with z := z1 - i1 z2, the first idempotent component of omega."""
    return substitute(fe, {"z1": sub(Z1, mul(UNIT_I1, Z2)), "cz1": add(CZ1, mul(UNIT_I1, CZ2))})


def transport_to_p2(fe: Expr) -> Expr:
    """fe(z) with z := z1 + i1 z2."""
    return substitute(fe, {"z1": add(Z1, mul(UNIT_I1, Z2)), "cz1": sub(CZ1, mul(UNIT_I1, CZ2))})


def idempotent_construction(fe1: Expr, fe2: Expr) -> Expr:
    """f(z1 + z2 i2) = fe1(z1 - z2 i1) e1 + fe2(z1 + z2 i1) e2 for planar fe1, fe2 in z1, cz1."""
    return add(mul(transport_to_p1(fe1), Const(E1)), mul(transport_to_p2(fe2), Const(E2)))


def idempotent_construction_check(fe1: Expr, fe2: Expr, grid: GridDomain,
                                  tol: Optional[float] = None) -> ResidualReport:
    """For holomorphic fe1, fe2 the recombination is T-holomorphic with
    f' = fe1'(P1) e1 + fe2'(P2) e2."""
    started = time.perf_counter()
    tol = VERDICT_TOL if tol is None else tol
    f = idempotent_construction(fe1, fe2)
    expected = idempotent_construction(differentiate(fe1, "z1"), differentiate(fe2, "z1"))
    worst, mean, _ = _compare(t_derivative(f), expected, grid)
    holomorphic = check_t_holomorphic(f, grid, tol)
    combined = max(worst, holomorphic.max_residual if holomorphic.max_residual is not None else float("inf"))
    return ResidualReport.measured(
        "idempotent recombination of planar holomorphic functions", grid.metadata(),
        (combined, mean), tol, started,
        {"derivative_residual": worst, "t_holomorphic_residual": holomorphic.max_residual},
    )


def t_derivative_residual(e: Expr, expected: Expr, grid: GridDomain, tol: Optional[float] = None) -> ResidualReport:
    started = time.perf_counter()
    tol = EXACT_TOL if tol is None else tol
    worst, mean, _ = _compare(t_derivative(e), expected, grid)
    return ResidualReport.measured("T-derivative f1_z1 + f2_z1 i2", grid.metadata(), (worst, mean), tol, started)

