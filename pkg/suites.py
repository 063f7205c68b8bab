"""Verification suites: named groups of cases that each produce a ResidualReport.

A case is declared with its id, anchor and default tolerance and run lazily;
errors raised inside a case become failed reports so one bad input never
stops a suite. Only ConfigError escapes.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from typing import Callable, Dict, Iterator, List, Optional, Tuple

import numpy as np

import catalog
from bicomplex import (
    I1,
    I2,
    J,
    ONE,
    Axis,
    Bicomplex,
    COMPLEMENT,
    compose_conjugations,
    format_bicomplex,
    inverse_by_conjugate,
    parse_bicomplex,
    random_bicomplex,
)
from bicomplex import cos as bcos
from bicomplex import exp as bexp
from bicomplex import sin as bsin
from calculus import (
    EXACT_TOL,
    FD_TOL,
    ORDER_SPREAD,
    VERDICT_TOL,
    WirtingerOp,
    d_omega,
    dagger_derivative_criterion,
    fd_first_derivative_check,
    fd_order_sweep,
    idempotent_construction,
    idempotent_construction_check,
    laplacian_factorization_residual,
    linearity_residual,
    plane_reduction_residual,
    product_rule_residual,
    real_expansion_residual,
    t_derivative_residual,
)
from config import DEFAULT_SEED, TOLERANCE_OVERRIDE
from dsl import format_expr, parse_expr
from errors import BvkError, ConfigError
from expressions import Expr, const, sub
from grid import AxisSpec, GridDomain, Plane, max_residual, sample
from pseudoanalytic import (
    LIMIT_TOL,
    NONDEGENERACY_TOL,
    RECONSTRUCTION_TOL,
    TRANSPORT_TOL,
    VEKUA_TOL,
    GeneratingPair,
    PairClass,
    char_coeffs,
    combination,
    decomposition_report,
    denominator_identity,
    e_pair_from_entry,
    e_pair_im_lemma,
    fg_derivative,
    fg_derivative_agreement,
    idempotent_split_check,
    limit_derivative,
    pi_correspondence,
    random_subalgebra,
    reduction_condition,
    transport_pair,
    validate_pair,
    vec_determinant_check,
    vekua_residual,
)
from schemas import SUITES, ResidualReport, SuiteConfig
from schrodinger import (
    FACTOR_TOL,
    cl_residual,
    eta_consistency,
    factorization_residual,
    lemma_residuals,
    main_vekua,
    main_vekua_report,
    nu_from_f0,
    one_dim_factorization_check,
    solution_family,
    specialize,
    split_check,
)

logger = logging.getLogger("bvk.suites")

ALGEBRA_TOL = 1e-12
ALGEBRA_SAMPLES = 1000
SOLUTION_SAMPLES = 20
DEFAULT_F0 = ("exp-z1", "cosh-z1", "exp-z1-cos-z2")
PI_PAIRS = ("unit", "exp-z1", "exp-z2", "rotated-constants", "exp-z1-tilted")
# Known constant potentials (nu, eta); None where the potential is not constant.
CONSTANT_POTENTIALS: Dict[str, Tuple[Optional[float], Optional[float]]] = {
    "exp-z1": (1.0, 1.0),
    "cosh-z1": (1.0, None),
    "one": (0.0, 0.0),
}
ONE_DIM_CASES = (("exp(x)", "x^2"), ("exp(x)", "exp(x)"), ("cosh(x)", "sinh(x)"))
LIMIT_POINT = Bicomplex(0.3, -0.2, 0.1, 0.25)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


@dataclass(frozen=True)
class Case:
    case_id: str
    anchor: str
    tolerance: float
    run: Callable[[], ResidualReport]


@dataclass
class SuiteContext:
    cfg: SuiteConfig
    grid: GridDomain
    rng: np.random.Generator


# ----------------------------------------------------------------------
# Running cases
# ----------------------------------------------------------------------

def _with_tolerance(report: ResidualReport, tol: float) -> ResidualReport:
    data = report.model_dump()
    data["tolerance"] = tol
    data["passed"] = report.max_residual is not None and report.error is None and report.max_residual <= tol
    return ResidualReport(**data)


def run_case(suite: str, case: Case, override: Optional[float] = None) -> ResidualReport:
    started = time.perf_counter()
    try:
        report = case.run()
    except ConfigError:
        raise
    except BvkError as exc:
        logger.warning("Case failed | case=%s | error_type=%s | error=%s", case.case_id, type(exc).__name__, exc)
        report = ResidualReport.failed(case.anchor, case.tolerance, f"{type(exc).__name__}: {exc}", started)
    except Exception as exc:
        logger.error("Case crashed | case=%s | error_type=%s | error=%s", case.case_id, type(exc).__name__, exc)
        report = ResidualReport.failed(case.anchor, case.tolerance, f"{type(exc).__name__}: {exc}", started)
    if override is not None:
        report = _with_tolerance(report, override)
    report = report.model_copy(update={"suite": suite, "case_id": case.case_id})
    logger.info("Case done | case=%s | passed=%s | max_residual=%s | tolerance=%.1e",
                case.case_id, report.passed, report.max_residual, report.tolerance)
    return report


def build_grid(cfg: SuiteConfig) -> GridDomain:
    grid = GridDomain.parse(cfg.grid) if cfg.grid else GridDomain()
    return grid.refine(cfg.refine) if cfg.refine else grid


def run_suite(cfg: SuiteConfig) -> Tuple[List[ResidualReport], int]:
    """Run the named suite (or all four) and return the reports with the exit code.

    Reports come back in declaration order, which is fixed by the
    configuration and the seed.
    """
    started = time.perf_counter()
    grid = build_grid(cfg)
    seed = DEFAULT_SEED if cfg.seed is None else cfg.seed
    override = cfg.tol if cfg.tol is not None else TOLERANCE_OVERRIDE
    names = SUITES if cfg.suite == "all" else (cfg.suite,)
    logger.info("Suite start | suite=%s | grid=%s | seed=%d | tol_override=%s", cfg.suite, grid.describe(), seed, override)
    reports: List[ResidualReport] = []
    for name in names:
        # One generator per suite keeps each suite's draws independent of the others.
        ctx = SuiteContext(cfg, grid, np.random.default_rng(seed))
        for case in _BUILDERS[name](ctx):
            reports.append(run_case(name, case, override))
    failed = [r.case_id for r in reports if not r.passed]
    code = EXIT_FAILED if failed else EXIT_OK
    logger.info("Suite finished | suite=%s | cases=%d | failed=%d | elapsed=%.2fs",
                cfg.suite, len(reports), len(failed), time.perf_counter() - started)
    if failed:
        logger.warning("Failed cases | suite=%s | cases=%s", cfg.suite, ",".join(failed[:20]))
    return reports, code


# ----------------------------------------------------------------------
# algebra
# ----------------------------------------------------------------------

def _identity(anchor: str, compute: Callable[[], Tuple[Bicomplex, ...]], n: int) -> Callable[[], ResidualReport]:
    """Report for ``difference, *references = compute()`` over random elements."""

    def run() -> ResidualReport:
        started = time.perf_counter()
        difference, *refs = compute()
        size = max(1, int(np.prod(difference.shape)))
        worst, mean, _ = max_residual(difference, *(_fit(r, size) for r in refs))
        return ResidualReport.measured(anchor, None, (worst, mean), ALGEBRA_TOL, started, {"samples": n})

    return run


def _count(anchor: str, compute: Callable[[], int], n: int) -> Callable[[], ResidualReport]:
    def run() -> ResidualReport:
        started = time.perf_counter()
        wrong = compute()
        return ResidualReport.measured(anchor, None, (float(wrong), float(wrong) / n), 0.0, started,
                                       {"samples": n, "misclassified": wrong})

    return run


def algebra_cases(ctx: SuiteContext) -> Iterator[Case]:
    n = ALGEBRA_SAMPLES
    a = random_bicomplex(ctx.rng, n)
    b = random_bicomplex(ctx.rng, n)
    c = random_bicomplex(ctx.rng, n)
    z = Bicomplex.coerce(ctx.rng.standard_normal(n) + 1j * ctx.rng.standard_normal(n))

    def case(key: str, anchor: str, compute: Callable[[], Tuple[Bicomplex, ...]]) -> Case:
        return Case(f"algebra.{key}", anchor, ALGEBRA_TOL, _identity(anchor, compute, n))

    yield case("ring.add_assoc", "addition is associative", lambda: ((a + b) + c - (a + (b + c)), a, b, c))
    yield case("ring.add_comm", "addition is commutative", lambda: (a + b - (b + a), a, b))
    yield case("ring.mul_assoc", "multiplication is associative",
               lambda: ((a * b) * c - a * (b * c), (a * b) * c))
    yield case("ring.mul_comm", "multiplication is commutative", lambda: (a * b - b * a, a * b))
    yield case("ring.distributive", "multiplication distributes over addition",
               lambda: (a * (b + c) - (a * b + a * c), a * b, a * c))
    yield case("ring.units", "i1^2 = i2^2 = -1, j^2 = 1, i1 i2 = j",
               lambda: (_stack([I1 * I1 + ONE, I2 * I2 + ONE, I1 * I2 - J]),))

    yield case("conjugation.involution", "each conjugation is an involution",
               lambda: (_stack([a.conjugate(k).conjugate(k) - a for k in (1, 2, 3)]), a))
    yield case("conjugation.additive", "conjugations are additive",
               lambda: (_stack([(a + b).conjugate(k) - (a.conjugate(k) + b.conjugate(k)) for k in (1, 2, 3)]), a, b))
    yield case("conjugation.multiplicative", "conjugations are multiplicative",
               lambda: (_stack([(a * b).conjugate(k) - a.conjugate(k) * b.conjugate(k) for k in (1, 2, 3)]), a * b))
    yield case("conjugation.klein", "composition of conjugations follows the Klein four-group table",
               lambda: (_stack([a.conjugate(k1).conjugate(k2) - a.conjugate(compose_conjugations(k1, k2))
                                for k1 in range(4) for k2 in range(4)]), a))

    def modulus_i1() -> Tuple[Bicomplex, ...]:
        m = a.modulus_sq(Axis.I1)
        expected = Bicomplex.coerce(a.z1 ** 2 + a.z2 ** 2)
        return m - expected, m

    def modulus_i2() -> Tuple[Bicomplex, ...]:
        m = a.modulus_sq(Axis.I2)
        z1, z2 = a.z1, a.z2
        expected = Bicomplex(np.abs(z1) ** 2 - np.abs(z2) ** 2, 0.0, 2.0 * np.real(z1 * np.conj(z2)), 0.0)
        return m - expected, m

    def modulus_j() -> Tuple[Bicomplex, ...]:
        m = a.modulus_sq(Axis.J)
        z1, z2 = a.z1, a.z2
        expected = Bicomplex(np.abs(z1) ** 2 + np.abs(z2) ** 2, 0.0, 0.0, -2.0 * np.imag(z1 * np.conj(z2)))
        return m - expected, m

    yield case("modulus.i1", "|w|^2_i1 = z1^2 + z2^2", modulus_i1)
    yield case("modulus.i2", "|w|^2_i2 = |z1|^2 - |z2|^2 + 2 Re(z1 conj z2) i2", modulus_i2)
    yield case("modulus.j", "|w|^2_j = |z1|^2 + |z2|^2 - 2 Im(z1 conj z2) j", modulus_j)

    def inverse_identity() -> Tuple[Bicomplex, ...]:
        inv = a.inverse()
        scale = Bicomplex(np.asarray(a.norm()) * np.asarray(inv.norm()))
        return _stack([a * inv - ONE, inverse_by_conjugate(a) - inv]), _stack([scale, inv])

    yield case("inverse", "w w^dagger2 / |w|^2_i1 = 1", inverse_identity)
    yield Case("algebra.null_cone", "the null cone is z (i1 +- i2)", 0.0,
               _count("the null cone is z (i1 +- i2)",
                      lambda: int(np.sum(~(z * (I1 + I2)).null_mask()) + np.sum(~(z * (I1 - I2)).null_mask())
                                  + np.sum(a.null_mask())), n))

    def idempotent_transport() -> Tuple[Bicomplex, ...]:
        parts = []
        for op in (lambda x, y: x + y, lambda x, y: x - y, lambda x, y: x * y):
            w = op(a, b)
            parts.append(Bicomplex.from_idempotent(op(a.p1, b.p1), op(a.p2, b.p2)) - w)
        parts.append(Bicomplex.from_idempotent(a.p1, a.p2) - a)
        return _stack(parts), a * b

    yield case("idempotent", "ring operations act componentwise on idempotent components", idempotent_transport)

    yield case("pi", "pi is an involutive ring automorphism swapping i1 and i2, dagger1 and dagger2",
               lambda: (_stack([a.pi().pi() - a, (a * b).pi() - a.pi() * b.pi(), (a + b).pi() - (a.pi() + b.pi()),
                                I1.pi() - I2,
                                a.conjugate(1).pi() - a.pi().conjugate(2), a.conjugate(2).pi() - a.pi().conjugate(1),
                                a.conjugate(3).pi() - a.pi().conjugate(3)]), a * b))

    def pi_quotient() -> Tuple[Bicomplex, ...]:
        keep = ~b.null_mask()
        num, den = (Bicomplex(*(np.asarray(c)[keep] for c in w.components())) for w in (a, b))
        quotient = num / den
        return quotient.pi() - num.pi() / den.pi(), quotient

    yield case("pi_quotient", "pi(a / b) = pi(a) / pi(b) off the null cone", pi_quotient)
    yield case("sc_vec", "w = Sc(w) + Vec(w) u in each representation",
               lambda: (_stack([a.sc(ax) + a.vec(ax) * COMPLEMENT[ax] - a for ax in Axis]), a))
    yield case("elementary", "exp(a + b) = exp(a) exp(b) and sin^2 + cos^2 = 1",
               lambda: (_stack([bexp(a.scale(0.5) + b.scale(0.5)) - bexp(a.scale(0.5)) * bexp(b.scale(0.5)),
                                bsin(a.scale(0.5)) ** 2 + bcos(a.scale(0.5)) ** 2 - ONE]),
                        bexp(a.scale(0.5)) * bexp(b.scale(0.5)), bsin(a.scale(0.5)) ** 2))

    def literal_round_trip() -> int:
        return sum(parse_bicomplex(format_bicomplex(a.take(i))) != a.take(i) for i in range(n))

    yield Case("algebra.literal_round_trip", "bicomplex literals print and parse back exactly", 0.0,
               _count("bicomplex literals print and parse back exactly", literal_round_trip, n))

    def dsl_round_trip() -> int:
        wrong = 0
        for entry in catalog.FUNCTIONS:
            e = catalog.function(entry.name)
            if format_expr(parse_expr(format_expr(e))) != format_expr(e):
                wrong += 1
        return wrong

    yield Case("algebra.dsl_round_trip", "expressions print and parse back to the same tree", 0.0,
               _count("expressions print and parse back to the same tree", dsl_round_trip, len(catalog.FUNCTIONS)))


def _fit(ref: Bicomplex, size: int) -> Bicomplex:
    """Repeat a reference cyclically to the length of a stacked difference."""
    return Bicomplex(*(np.resize(np.atleast_1d(np.asarray(c, dtype=float)), size) for c in ref.components()))


def _stack(parts: List[Bicomplex]) -> Bicomplex:
    """Concatenate array-valued elements so one residual covers several identities."""
    full = [p.broadcast() if not p.is_scalar else Bicomplex(*(np.atleast_1d(c) for c in p.components()))
            for p in parts]
    return Bicomplex(*(np.concatenate([np.atleast_1d(np.asarray(p.components()[i], dtype=float)) for p in full])
                       for i in range(4)))


# ----------------------------------------------------------------------
# calculus
# ----------------------------------------------------------------------

def _functions(ctx: SuiteContext) -> List[Tuple[str, Expr, Optional[bool]]]:
    out: List[Tuple[str, Expr, Optional[bool]]] = [
        (e.name, catalog.function(e.name), e.t_holomorphic) for e in catalog.FUNCTIONS
    ]
    if ctx.cfg.w:
        name, e = catalog.resolve_function(ctx.cfg.w)
        out.append(("user", e, None))
    return out


def _planes(ctx: SuiteContext) -> Tuple[Plane, ...]:
    return (Plane.parse(ctx.cfg.plane),) if ctx.cfg.plane else (Plane.C_I2, Plane.D)


def _verdict(e: Expr, grid: GridDomain, expected: Optional[bool]) -> ResidualReport:
    report = dagger_derivative_criterion(e, grid)
    if expected is not None and report.detail["derivative_exists"] != expected:
        return report.model_copy(update={
            "passed": False,
            "error": f"verdict {report.detail['derivative_exists']} contradicts the catalog ({expected})",
        })
    return report


def calculus_cases(ctx: SuiteContext) -> Iterator[Case]:
    grid = ctx.grid
    functions = _functions(ctx)
    for name, e, expected in functions:
        yield Case(f"calculus.laplacian.{name}", "complex Laplacian equals 4 d_omega d_omega_dagger2", EXACT_TOL,
                   lambda e=e: laplacian_factorization_residual(e, grid))
    for name, e, expected in functions:
        yield Case(f"calculus.holomorphy.{name}", "derivative exists iff the three dagger derivatives vanish", 0.0,
                   lambda e=e, expected=expected: _verdict(e, grid, expected))
    for name, e, expected in functions:
        if expected:
            yield Case(f"calculus.t_derivative.{name}", "T-derivative f1_z1 + f2_z1 i2", EXACT_TOL,
                       lambda e=e: t_derivative_residual(e, d_omega(e), grid))
    for name, src in catalog.SWEEP_FUNCTIONS.items():
        e = catalog.expr(src)
        yield Case(f"calculus.real_expansion.{name}", "4 Delta_C as real second partials", FD_TOL,
                   lambda e=e: real_expansion_residual(e, grid))
        yield Case(f"calculus.order_sweep.{name}", "order-2 convergence of the real expansion", ORDER_SPREAD,
                   lambda e=e: fd_order_sweep(e, grid))
        yield Case(f"calculus.first_partials.{name}", "exact partials against central differences", 1e-7,
                   lambda e=e: fd_first_derivative_check(e, grid))
    for name in catalog.HOLOMORPHIC_SWEEP:
        e = catalog.function(name)
        yield Case(f"calculus.real_expansion.{name}", "4 Delta_C as real second partials", FD_TOL,
                   lambda e=e: real_expansion_residual(e, grid))
        yield Case(f"calculus.order_sweep.{name}", "order-2 convergence of the real expansion", ORDER_SPREAD,
                   lambda e=e: fd_order_sweep(e, grid, at_least=True))
    sweep = list(catalog.SWEEP_FUNCTIONS)
    pairs = list(zip(sweep, sweep[1:]))
    alpha, beta = Bicomplex(*ctx.rng.standard_normal(4)), Bicomplex(*ctx.rng.standard_normal(4))
    for op in WirtingerOp:
        for left, right in pairs:
            a, b = catalog.expr(catalog.SWEEP_FUNCTIONS[left]), catalog.expr(catalog.SWEEP_FUNCTIONS[right])
            yield Case(f"calculus.product_rule.{op.value}.{left}.{right}", f"product rule for {op.value}", EXACT_TOL,
                       lambda a=a, b=b, op=op: product_rule_residual(a, b, op, grid))
            yield Case(f"calculus.linearity.{op.value}.{left}.{right}", f"linearity of {op.value}", EXACT_TOL,
                       lambda a=a, b=b, op=op: linearity_residual(a, b, alpha, beta, op, grid))
    for plane in _planes(ctx):
        for name in ("exp-z1-sin-z2", "sin-z1z2", "x2-y2", "omega-cube"):
            e = catalog.function(name)
            yield Case(f"calculus.plane.{plane.value}.{name}", f"Delta_C restricted to {plane.value}", FD_TOL,
                       lambda e=e, plane=plane: plane_reduction_residual(e, grid, plane))
        e = catalog.function("omega-cube")
        yield Case(f"calculus.plane_grid.{plane.value}.omega-cube", f"Delta_C restricted to {plane.value}",
                   1e-8, lambda e=e, plane=plane: plane_reduction_residual(e, grid, plane, spacing="grid"))
    for k, (fe1, fe2) in enumerate((("exp(z1)", "z1^2"), ("sin(z1)", "cosh(z1)"), ("1/(z1 + 5)", "exp(2*z1)"))):
        yield Case(f"calculus.idempotent_construction.{k}", "idempotent recombination of planar holomorphic functions",
                   VERDICT_TOL, lambda fe1=fe1, fe2=fe2: idempotent_construction_check(
                       catalog.expr(fe1), catalog.expr(fe2), grid))


# ----------------------------------------------------------------------
# pseudoanalytic
# ----------------------------------------------------------------------

def _pairs(ctx: SuiteContext) -> List[GeneratingPair]:
    if ctx.cfg.pair:
        name, F, G = catalog.resolve_pair(ctx.cfg.pair)
        return [GeneratingPair(F, G, PairClass.R1, ctx.grid, name)]
    return [GeneratingPair(catalog.expr(p.F), catalog.expr(p.G), PairClass.R1, ctx.grid, p.name)
            for p in catalog.PAIRS]


def _test_functions(ctx: SuiteContext) -> List[Tuple[str, Expr]]:
    if ctx.cfg.w:
        return [catalog.resolve_function(ctx.cfg.w)]
    return [(f"w{k}", catalog.expr(src)) for k, src in enumerate(catalog.TEST_FUNCTIONS)]


def _generators_solve(p: GeneratingPair, k: int) -> ResidualReport:
    """F and G solve their own k-th Vekua equation."""
    coeffs = char_coeffs(p)
    f = vekua_residual(p.F, p, k, coeffs=coeffs)
    g = vekua_residual(p.G, p, k, coeffs=coeffs)
    return f if (f.max_residual or 0.0) >= (g.max_residual or 0.0) else g


def _generators_annihilated(p: GeneratingPair) -> ResidualReport:
    started = time.perf_counter()
    coeffs = char_coeffs(p)
    values = [sample(fg_derivative(x, p, coeffs), p.domain).values for x in (p.F, p.G)]
    scales = [sample(x, p.domain).values for x in (p.F, p.G)]
    worst = max(max_residual(v, s)[0] for v, s in zip(values, scales))
    return ResidualReport.measured(f"(F,G)-derivatives of F and G vanish ({p.cls.value})", p.domain.metadata(),
                                   (worst, worst), VEKUA_TOL, started, {"pair": p.name})


def _pair_cases(prefix: str, p: GeneratingPair, tests: List[Tuple[str, Expr]], reduction: bool) -> Iterator[Case]:
    cls = p.cls.value
    yield Case(f"{prefix}.valid", f"{cls} generating pair nondegeneracy", NONDEGENERACY_TOL,
               lambda: validate_pair(p))
    yield Case(f"{prefix}.vec_determinant", "Vec(F^c G) as a 2x2 determinant", EXACT_TOL,
               lambda: vec_determinant_check(p))
    yield Case(f"{prefix}.denominator", "denominator F G^c - F^c G = -2 u Vec(F^c G)", EXACT_TOL,
               lambda: denominator_identity(p))
    for k in (1, 2, 3):
        yield Case(f"{prefix}.vekua_k{k}", f"Vekua equation k={k} ({cls})", VEKUA_TOL,
                   lambda k=k: _generators_solve(p, k))
    yield Case(f"{prefix}.derivative_of_generators", f"(F,G)-derivatives of F and G vanish ({cls})", VEKUA_TOL,
               lambda: _generators_annihilated(p))
    for name, w in tests:
        yield Case(f"{prefix}.decompose.{name}", f"unique decomposition w = phi F + psi G ({cls})",
                   RECONSTRUCTION_TOL, lambda w=w: decomposition_report(w, p))
        yield Case(f"{prefix}.derivative_forms.{name}", f"three forms of the (F,G)-derivative ({cls})",
                   RECONSTRUCTION_TOL, lambda w=w: fg_derivative_agreement(w, p))
    if reduction:
        for k in (1, 3):
            yield Case(f"{prefix}.reduction_k{k}", f"reduction condition k={k} ({cls})", VEKUA_TOL,
                       lambda k=k: reduction_condition(p, k, tuple(w for _, w in tests[:2])))


def _planar_grid(grid: GridDomain) -> GridDomain:
    return GridDomain.planar(count=grid.x.count if grid.x.active else 9)


def pseudoanalytic_cases(ctx: SuiteContext) -> Iterator[Case]:
    tests = _test_functions(ctx)
    pairs = _pairs(ctx)
    for p in pairs:
        yield from _pair_cases(f"pseudoanalytic.R1.{p.name}", p, tests, reduction=True)
    for p in pairs:
        for k, src in enumerate(catalog.PSEUDOANALYTIC.get(p.name, ())):
            w = catalog.expr(src)
            yield Case(f"pseudoanalytic.R1.{p.name}.solution{k}", "pseudoanalytic functions solve the three Vekua equations", VEKUA_TOL,
                       lambda w=w, p=p: _solves_all(w, p))
            yield Case(f"pseudoanalytic.R1.{p.name}.limit{k}",
                       "(F,G)-derivative as a limit of difference quotients (R1)", LIMIT_TOL,
                       lambda w=w, p=p: limit_derivative(w, p, LIMIT_POINT))
        for k in range(2):
            alpha, beta = random_subalgebra(ctx.rng, PairClass.R1), random_subalgebra(ctx.rng, PairClass.R1)
            w = combination(p, alpha, beta)
            yield Case(f"pseudoanalytic.R1.{p.name}.combination{k}", "pseudoanalytic functions solve the three Vekua equations", VEKUA_TOL,
                       lambda w=w, p=p: _solves_all(w, p))
    pi_pairs = [p for p in pairs if ctx.cfg.pair or p.name in PI_PAIRS]
    for p in pi_pairs:
        q = transport_pair(p)
        yield from _pair_cases(f"pseudoanalytic.R2.{q.name}", q, tests[:2], reduction=False)
        for name, w in tests:
            yield Case(f"pseudoanalytic.pi.{p.name}.{name}",
                       "pi transports (F,G)_i1-derivatives to (piFpi, piGpi)_i2-derivatives", TRANSPORT_TOL,
                       lambda w=w, p=p: pi_correspondence(w, p))
    planar = _planar_grid(ctx.grid)
    for entry in catalog.E_PAIRS:
        yield from _e_pair_cases(entry, planar, tests[:2])


def _solves_all(w: Expr, p: GeneratingPair) -> ResidualReport:
    coeffs = char_coeffs(p)
    reports = [vekua_residual(w, p, k, coeffs=coeffs) for k in (1, 2, 3)]
    return max(reports, key=lambda r: r.max_residual if r.max_residual is not None else float("inf"))


def _e_pair_cases(entry: catalog.EPairEntry, planar: GridDomain, tests: List[Tuple[str, Expr]]) -> Iterator[Case]:
    prefix = f"pseudoanalytic.R3.{entry.name}"
    built: Dict[str, object] = {}

    def pair():
        if "pair" not in built:
            built["pair"] = e_pair_from_entry(entry, planar, planar, catalog.expr)
        return built["pair"]

    yield Case(f"{prefix}.planar_conditions", "planar Im conditions give an invertible Vec(F^3 G)", 1.0,
               lambda: e_pair_im_lemma(*pair()))
    for k in (1, 2, 3):
        yield Case(f"{prefix}.vekua_k{k}", f"Vekua equation k={k} (R3)", VEKUA_TOL,
                   lambda k=k: _generators_solve(pair()[0], k))
    for name, w in tests:
        yield Case(f"{prefix}.decompose.{name}", "unique decomposition w = phi F + psi G (R3)", RECONSTRUCTION_TOL,
                   lambda w=w: decomposition_report(w, pair()[0]))
        yield Case(f"{prefix}.derivative_forms.{name}", "three forms of the (F,G)-derivative (R3)",
                   RECONSTRUCTION_TOL, lambda w=w: fg_derivative_agreement(w, pair()[0]))

    def split() -> ResidualReport:
        p, planes = pair()
        w = idempotent_construction(catalog.expr(entry.we1), catalog.expr(entry.we2))
        return idempotent_split_check(w, p, planes)

    yield Case(f"{prefix}.split", "R3 pseudoanalytic functions split into planar components", VEKUA_TOL, split)


# ----------------------------------------------------------------------
# schrodinger
# ----------------------------------------------------------------------

def _f0_list(ctx: SuiteContext) -> List[Tuple[str, Expr]]:
    if ctx.cfg.f0:
        return [catalog.resolve_f0(ctx.cfg.f0)]
    return [(name, catalog.expr(catalog.F0_INSTANCES[name])) for name in DEFAULT_F0]


def _constant_potentials(inst, eq, nu: Optional[float], eta: Optional[float]) -> ResidualReport:
    started = time.perf_counter()
    gaps: Dict[str, float] = {}
    for label, e, value in (("nu", inst.nu, nu), ("eta", eq.eta, eta)):
        if value is not None:
            gaps[label] = max_residual(sample(sub(e, const(value)), inst.domain).values)[0]
    worst = max(gaps.values()) if gaps else 0.0
    return ResidualReport.measured("constant potentials of the exponential solutions", inst.domain.metadata(),
                                   (worst, worst), 1e-13, started, {"gaps": gaps, "f0": inst.name})


def _one_dim_grid(grid: GridDomain) -> GridDomain:
    x = grid.x if grid.x.active else AxisSpec()
    return GridDomain(x=x, y=AxisSpec(frozen=0.0), p=AxisSpec(frozen=0.0), q=AxisSpec(frozen=0.0))


def schrodinger_cases(ctx: SuiteContext) -> Iterator[Case]:
    grid = ctx.grid
    phis = [(f"phi{k}", catalog.expr(src)) for k, src in enumerate(catalog.PHI_FUNCTIONS)]
    if ctx.cfg.w:
        phis.append(catalog.resolve_function(ctx.cfg.w))
    for name, f0 in _f0_list(ctx):
        prefix = f"schrodinger.{name}"
        cache: Dict[str, object] = {}

        def inst(f0=f0, name=name, cache=cache):
            if "inst" not in cache:
                cache["inst"] = nu_from_f0(f0, grid, name)
            return cache["inst"]

        def eq(inst=inst, cache=cache):
            if "eq" not in cache:
                cache["eq"] = main_vekua(inst())
            return cache["eq"]

        yield Case(f"{prefix}.cl", "f0 solves (Delta_C - nu) f = 0", FACTOR_TOL, lambda inst=inst: cl_residual(inst()))
        for label, phi in phis:
            yield Case(f"{prefix}.factorization.{label}", "(Delta_C - nu) = 4 (d_omega_dagger2 + q C)(d_omega - q C)",
                       FACTOR_TOL, lambda inst=inst, phi=phi, label=label: factorization_residual(inst(), phi, label=label))
        yield Case(f"{prefix}.main_vekua", "main Vekua equation W_{omega dagger2} = (d_omega_dagger2 f0 / f0) W^dagger2",
                   EXACT_TOL, lambda eq=eq: main_vekua_report(eq()))
        yield Case(f"{prefix}.eta", "eta = -nu + 2 |grad_C f0|^2_i1 / f0^2 = 4(|b|^2_i1 - b_omega)", FACTOR_TOL,
                   lambda eq=eq: eta_consistency(eq()))
        if name in CONSTANT_POTENTIALS:
            nu, eta = CONSTANT_POTENTIALS[name]
            yield Case(f"{prefix}.constants", "constant potentials of the exponential solutions", 1e-13,
                       lambda inst=inst, eq=eq, nu=nu, eta=eta: _constant_potentials(inst(), eq(), nu, eta))
        yield Case(f"{prefix}.split.f0", "Sc W solves (Delta_C - nu) u = 0 and Vec W solves (Delta_C - eta) v = 0",
                   FACTOR_TOL, lambda eq=eq: split_check(eq(), eq().pair.F, label="f0"))
        yield Case(f"{prefix}.split.i2_over_f0",
                   "Sc W solves (Delta_C - nu) u = 0 and Vec W solves (Delta_C - eta) v = 0",
                   FACTOR_TOL, lambda eq=eq: split_check(eq(), eq().pair.G, label="i2/f0"))
        for k in range(SOLUTION_SAMPLES):
            alpha = Bicomplex(*ctx.rng.standard_normal(2))
            beta = Bicomplex(*ctx.rng.standard_normal(2))
            yield Case(f"{prefix}.split.family{k:02d}",
                       "Sc W solves (Delta_C - nu) u = 0 and Vec W solves (Delta_C - eta) v = 0", FACTOR_TOL,
                       lambda eq=eq, alpha=alpha, beta=beta, k=k: split_check(
                           eq(), solution_family(eq(), alpha, beta), label=f"family{k:02d}"))
        yield Case(f"{prefix}.lemma", "Sc and Vec of a main Vekua solution solve the b-dependent equations",
                   FACTOR_TOL, lambda eq=eq: lemma_residuals(
                       solution_family(eq(), Bicomplex(0.5, -1.0), Bicomplex(2.0, 0.25)), eq().b, grid))
        for plane in _planes(ctx):
            yield Case(f"{prefix}.specialize.{plane.value}",
                       f"factorization restricted to {plane.value}", FACTOR_TOL,
                       lambda inst=inst, plane=plane: specialize(inst(), plane, [phi for _, phi in phis]))
    line = _one_dim_grid(grid)
    for k, (f0_src, phi_src) in enumerate(ONE_DIM_CASES):
        yield Case(f"schrodinger.one_dim.{k}", "-d2/dx2 + nu = (-d/dx - f0'/f0)(d/dx - f0'/f0)", EXACT_TOL,
                   lambda f0_src=f0_src, phi_src=phi_src, k=k: one_dim_factorization_check(
                       catalog.expr(f0_src), catalog.expr(phi_src), line, label=phi_src))


_BUILDERS: Dict[str, Callable[[SuiteContext], Iterator[Case]]] = {
    "algebra": algebra_cases,
    "calculus": calculus_cases,
    "pseudoanalytic": pseudoanalytic_cases,
    "schrodinger": schrodinger_cases,
}
