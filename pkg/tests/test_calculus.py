"""
Bicomplex calculus tests.
Verifies the Wirtinger operators, the Laplacian factorization, the
finite-difference oracles, T-holomorphy verdicts, the restriction planes
and the idempotent construction.

Run standalone:  python tests/test_calculus.py
"""

import os
import sys

# ── Windows UTF-8 fix ────────────────────────────────────────────────────────
os.environ["PYTHONIOENCODING"] = "utf-8"
if sys.platform == "win32":
    sys.stdout.reconfigure(encoding="utf-8", errors="replace")
    sys.stderr.reconfigure(encoding="utf-8", errors="replace")

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))
sys.path.insert(0, os.path.dirname(__file__))

import numpy as np  # noqa: E402

from tests.helpers import (  # noqa: E402
    clear_results,
    get_critical_failures,
    get_results,
    print_summary,
    record,
    report_ok,
    section,
    small_grid,
    timed,
)

import catalog  # noqa: E402
from bicomplex import Bicomplex  # noqa: E402
from bicomplex import exp as bexp  # noqa: E402
from calculus import (  # noqa: E402
    WirtingerOp,
    check_t_holomorphic,
    d_omega,
    d_omega_dagger,
    dagger_derivative_criterion,
    fd_first_derivative_check,
    fd_order_sweep,
    idempotent_construction_check,
    laplacian_factorization_residual,
    linearity_residual,
    plane_reduction_residual,
    product_rule_residual,
    real_expansion_residual,
    real_partial,
    t_derivative_residual,
)
from errors import ConfigError  # noqa: E402
from expressions import evaluate  # noqa: E402
from grid import Chart, GridDomain, max_residual, sample  # noqa: E402


def _gap(e, value, grid) -> float:
    got = sample(e, grid).values
    return max_residual(got - Bicomplex(value) - Bicomplex(np.zeros(grid.size)))[0]


def run() -> None:
    """Execute all calculus tests."""
    clear_results()
    grid = small_grid()
    f = catalog.function
    omega = catalog.expr("z1 + z2*I2")

    section("BICOMPLEX CALCULUS TESTS")

    # 1. Operators on omega and its conjugates
    try:
        gaps = {
            "d_omega omega = 1": _gap(d_omega(omega), 1.0, grid),
            "d_dagger2 omega = 0": _gap(d_omega_dagger(omega, 2), 0.0, grid),
            "d_dagger2 omega^dagger2 = 1": _gap(d_omega_dagger(f("omega-dagger2"), 2), 1.0, grid),
            "d_dagger1 omega^dagger1 = 1": _gap(d_omega_dagger(f("omega-dagger1"), 1), 1.0, grid),
            "d_dagger3 omega^dagger3 = 1": _gap(d_omega_dagger(f("omega-dagger3"), 3), 1.0, grid),
            "d_dagger1 omega = 0": _gap(d_omega_dagger(omega, 1), 0.0, grid),
        }
        worst = max(gaps.values())
        record("Operators: action on omega and its conjugates", worst < 1e-15, 0, f"Worst: {worst:.2e}", "OPERATORS")
    except Exception as e:
        record("Operators: action on omega and its conjugates", False, 0, str(e), "OPERATORS")

    # 2. Laplacian factorization
    try:
        for name in ("exp-z1-sin-z2", "z1-cz1", "quotient"):
            report, lat = timed(lambda name=name: laplacian_factorization_residual(f(name), grid))
            ok, detail = report_ok(report)
            record(f"Laplacian: Delta_C = 4 d_omega d_omega_dagger2 ({name})", ok, lat, detail, "LAPLACIAN")
    except Exception as e:
        record("Laplacian: Delta_C = 4 d_omega d_omega_dagger2", False, 0, str(e), "LAPLACIAN")

    # 3. Real expansion against central differences
    try:
        report, lat = timed(lambda: real_expansion_residual(f("exp-z1-sin-z2"), grid))
        ok, detail = report_ok(report)
        record("Oracle: 4 Delta_C as real second partials", ok, lat, detail, "ORACLE")
    except Exception as e:
        record("Oracle: 4 Delta_C as real second partials", False, 0, str(e), "ORACLE")

    # 4. Second-order convergence for inputs that keep an h^2 error term
    for name, src in catalog.SWEEP_FUNCTIONS.items():
        try:
            report, lat = timed(lambda src=src: fd_order_sweep(catalog.expr(src), grid))
            orders = report.detail.get("observed_order")
            ok = report.passed and all(o is not None and abs(o - 2.0) < 0.2 for o in orders)
            record(f"Oracle: observed order is 2 for {name}", ok, lat, f"Orders: {orders}", "ORACLE")
        except Exception as e:
            record(f"Oracle: observed order is 2 for {name}", False, 0, str(e), "ORACLE")

    # 5. Holomorphic in z1: h^2 terms cancel, order is at least 2
    try:
        at_least, lat = timed(lambda: fd_order_sweep(f("exp-z1"), grid, at_least=True))
        exact_two = fd_order_sweep(f("exp-z1"), grid)
        fourth = fd_order_sweep(f("exp-z1"), grid, order=4.0)
        orders = at_least.detail.get("observed_order")
        ok = at_least.passed and all(o is not None and o >= 2.0 for o in orders)
        ok = ok and fourth.passed and not exact_two.passed
        record("Oracle: exp(z1) converges at order >= 2", ok, lat, f"Orders: {orders}", "ORACLE")
    except Exception as e:
        record("Oracle: exp(z1) converges at order >= 2", False, 0, str(e), "ORACLE")

    # 6. First partials
    try:
        report, lat = timed(lambda: fd_first_derivative_check(f("sin-z1z2"), grid))
        ok, detail = report_ok(report)
        dx = sample(real_partial(catalog.expr("x^2 - y^2"), "x"), grid).values
        ok = ok and float(np.max(np.abs(np.asarray(dx.w0) - 2.0 * grid.coordinates()["x"]))) < 1e-14
        record("Oracle: exact real partials against central differences", ok, lat, detail, "ORACLE")
    except Exception as e:
        record("Oracle: exact real partials against central differences", False, 0, str(e), "ORACLE")

    # 7. T-holomorphy verdicts follow the catalog
    try:
        wrong = []
        for entry in catalog.FUNCTIONS:
            verdict = check_t_holomorphic(f(entry.name), grid).passed
            if verdict != entry.t_holomorphic:
                wrong.append(entry.name)
        record("Holomorphy: verdicts match the catalog", not wrong, 0,
               f"Wrong: {wrong}" if wrong else f"{len(catalog.FUNCTIONS)} functions", "HOLOMORPHY")
    except Exception as e:
        record("Holomorphy: verdicts match the catalog", False, 0, str(e), "HOLOMORPHY")

    # 8. Dagger criterion agrees with the Cauchy-Riemann verdict
    try:
        results = {}
        for name in ("exp-omega", "omega-dagger2", "cz1", "constant"):
            report = dagger_derivative_criterion(f(name), grid)
            results[name] = (report.passed, report.detail["derivative_exists"])
        ok = all(p for p, _ in results.values())
        ok = ok and results["exp-omega"][1] is True and results["omega-dagger2"][1] is False
        record("Holomorphy: derivative exists iff the dagger derivatives vanish", ok, 0, f"{results}", "HOLOMORPHY")
    except Exception as e:
        record("Holomorphy: derivative exists iff the dagger derivatives vanish", False, 0, str(e), "HOLOMORPHY")

    # 9. T-derivative
    try:
        report = t_derivative_residual(f("omega-cube"), catalog.expr("3*(z1 + z2*I2)^2"), grid)
        ok, detail = report_ok(report)
        record("Holomorphy: (omega^3)' = 3 omega^2", ok, 0, detail, "HOLOMORPHY")
    except Exception as e:
        record("Holomorphy: (omega^3)' = 3 omega^2", False, 0, str(e), "HOLOMORPHY")

    # 10. Product rule and linearity
    try:
        a, b = f("sin-z1z2"), f("quotient")
        failed = []
        for op in WirtingerOp:
            if not product_rule_residual(a, b, op, grid).passed:
                failed.append(f"product/{op.value}")
            if not linearity_residual(a, b, Bicomplex(1.0, -2.0, 0.5, 0.3), Bicomplex(0.0, 1.0, 0.0, -1.0),
                                      op, grid).passed:
                failed.append(f"linearity/{op.value}")
        record("Operators: product rule and linearity", not failed, 0,
               f"Failed: {failed}" if failed else "4 operators", "OPERATORS")
    except Exception as e:
        record("Operators: product rule and linearity", False, 0, str(e), "OPERATORS")

    # 11. Restriction to C(i2) and D
    try:
        reports = {plane: plane_reduction_residual(f("exp-z1-sin-z2"), grid, plane) for plane in ("c2", "d")}
        ok = all(r.passed for r in reports.values())
        record("Planes: Delta_C reduces to the Laplacian and the wave operator", ok, 0,
               f"{ {k: r.max_residual for k, r in reports.items()} }", "PLANES")
    except Exception as e:
        record("Planes: Delta_C reduces to the Laplacian and the wave operator", False, 0, str(e), "PLANES")

    # 12. Lattice spacing is exact for cubics
    try:
        report = plane_reduction_residual(f("omega-cube"), grid, "d", spacing="grid")
        ok, detail = report_ok(report)
        record("Planes: lattice second differences on omega^3", ok, 0, detail, "PLANES")
    except Exception as e:
        record("Planes: lattice second differences on omega^3", False, 0, str(e), "PLANES")

    # 13. Idempotent construction
    try:
        report, lat = timed(lambda: idempotent_construction_check(catalog.expr("exp(z1)"), catalog.expr("z1^2"),
                                                                 grid))
        ok, detail = report_ok(report)
        record("Idempotent: fe1(P1) e1 + fe2(P2) e2 is T-holomorphic", ok, lat, detail, "IDEMPOTENT")
    except Exception as e:
        record("Idempotent: fe1(P1) e1 + fe2(P2) e2 is T-holomorphic", False, 0, str(e), "IDEMPOTENT")

    # 14. Finite differences need the cartesian chart
    try:
        skewed = GridDomain.parse("x=-1:1:3,y=-1:1:3,p=-1:1:3,q=-1:1:3", chart=Chart.IDEMPOTENT)
        raised = False
        try:
            real_expansion_residual(f("exp-z1"), skewed)
        except ConfigError:
            raised = True
        record("Errors: finite differences on the idempotent chart are rejected", raised, 0, "ConfigError",
               "ERRORS")
    except Exception as e:
        record("Errors: finite differences on the idempotent chart are rejected", False, 0, str(e), "ERRORS")

    # 15. Derivatives are exact at a single point
    try:
        point = {"z1": Bicomplex(0.2, 0.1), "z2": Bicomplex(-0.4, 0.3),
                 "cz1": Bicomplex(0.2, -0.1), "cz2": Bicomplex(-0.4, -0.3)}
        w = Bicomplex(0.2, 0.1, -0.4, 0.3)
        got = evaluate(d_omega(f("exp-omega")), point)
        ok = got.allclose(bexp(w))
        record("Operators: d_omega exp(omega) = exp(omega) at a point", ok, 0, f"Got: {got}", "OPERATORS")
    except Exception as e:
        record("Operators: d_omega exp(omega) = exp(omega) at a point", False, 0, str(e), "OPERATORS")

    # 16. Rounding-level or stagnant errors have no observable order
    try:
        quadratic = fd_order_sweep(catalog.expr("x^2 - y^2"), grid)
        ok = not quadratic.passed and quadratic.detail["rounding_level"] is True and quadratic.error is not None
        ok = ok and not fd_order_sweep(catalog.expr("x^2 - y^2"), grid, at_least=True).passed
        record("Oracle: quadratic input does not pass the order sweep", ok, 0,
               f"error={quadratic.error}", "ORACLE")
    except Exception as e:
        record("Oracle: quadratic input does not pass the order sweep", False, 0, str(e), "ORACLE")

    print_summary(
        get_results(),
        get_critical_failures(),
        "BICOMPLEX CALCULUS REPORT",
    )


if __name__ == "__main__":
    run()
