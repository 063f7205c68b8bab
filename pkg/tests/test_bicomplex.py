"""
Bicomplex arithmetic tests.
Verifies the unit table, idempotents, conjugations, moduli, inverses,
the null cone, the pi map, elementary functions and the literal form.

Run standalone:  python tests/test_bicomplex.py
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
    section,
    timed,
)

import bicomplex as bc  # noqa: E402
from bicomplex import E1, E2, I1, I2, J, ONE, ZERO, Axis, Bicomplex, Conjugation  # noqa: E402
from errors import DslSyntaxError, NullConeError  # noqa: E402

SEED = 7


def run() -> None:
    """Execute all bicomplex arithmetic tests."""
    clear_results()
    rng = np.random.default_rng(SEED)
    a = bc.random_bicomplex(rng, 200)
    b = bc.random_bicomplex(rng, 200)

    section("BICOMPLEX ARITHMETIC TESTS")

    # 1. Unit table
    try:
        table = {
            "i1^2 = -1": I1 * I1 == -ONE,
            "i2^2 = -1": I2 * I2 == -ONE,
            "j^2 = 1": J * J == ONE,
            "i1 i2 = j": I1 * I2 == J,
            "i1 j = -i2": I1 * J == -I2,
        }
        bad = [k for k, ok in table.items() if not ok]
        record("Algebra: unit multiplication table", not bad, 0, f"Wrong: {bad}" if bad else "All 5 hold", "ALGEBRA")
    except Exception as e:
        record("Algebra: unit multiplication table", False, 0, str(e), "ALGEBRA")

    # 2. Idempotents
    try:
        ok = E1 * E1 == E1 and E2 * E2 == E2 and E1 * E2 == ZERO and E1 + E2 == ONE
        record("Algebra: e1, e2 are orthogonal idempotents", ok, 0, f"e1*e2={E1 * E2}", "ALGEBRA")
    except Exception as e:
        record("Algebra: e1, e2 are orthogonal idempotents", False, 0, str(e), "ALGEBRA")

    # 3. Idempotent components multiply componentwise
    try:
        prod = a * b
        gap = max(np.max(np.abs(prod.p1 - a.p1 * b.p1)), np.max(np.abs(prod.p2 - a.p2 * b.p2)))
        record("Algebra: idempotent components are multiplicative", gap < 1e-12, 0, f"Max gap: {gap:.2e}", "ALGEBRA")
    except Exception as e:
        record("Algebra: idempotent components are multiplicative", False, 0, str(e), "ALGEBRA")

    # 4. Commutativity and associativity
    try:
        c = bc.random_bicomplex(rng, 200)
        ok = (a * b).allclose(b * a) and ((a * b) * c).allclose(a * (b * c))
        record("Algebra: product is commutative and associative", ok, 0, "200 random triples", "ALGEBRA")
    except Exception as e:
        record("Algebra: product is commutative and associative", False, 0, str(e), "ALGEBRA")

    # 5. Conjugations form the Klein four-group
    try:
        pairs = [(1, 2, 3), (2, 3, 1), (1, 3, 2), (2, 2, 0)]
        ok = all(bc.compose_conjugations(x, y) == z for x, y, z in pairs)
        ok = ok and all(a.conjugate(x).conjugate(y).allclose(a.conjugate(z)) for x, y, z in pairs)
        record("Conjugation: composition is the Klein four-group", ok, 0, "dagger1 o dagger2 = dagger3", "CONJUGATION")
    except Exception as e:
        record("Conjugation: composition is the Klein four-group", False, 0, str(e), "CONJUGATION")

    # 6. Conjugations are ring automorphisms
    try:
        ok = all((a * b).conjugate(k).allclose(a.conjugate(k) * b.conjugate(k)) for k in (1, 2, 3))
        record("Conjugation: multiplicative for k = 1, 2, 3", ok, 0, "200 random pairs", "CONJUGATION")
    except Exception as e:
        record("Conjugation: multiplicative for k = 1, 2, 3", False, 0, str(e), "CONJUGATION")

    # 7. Square moduli
    try:
        w = Bicomplex(1.0, 2.0, -0.5, 0.25)
        m1 = w.modulus_sq(Axis.I1)
        expected = complex(w.z1) ** 2 + complex(w.z2) ** 2
        ok = m1.allclose(Bicomplex.coerce(expected))
        m2 = a.modulus_sq("i2")
        m3 = a.modulus_sq("j")
        ok = ok and np.max(np.hypot(m2.w1, m2.w3)) < 1e-12 and np.max(np.hypot(m3.w1, m3.w2)) < 1e-12
        record("Modulus: |w|^2_i1 = z1^2 + z2^2, others stay in their subalgebra", ok, 0, f"|w|^2_i1={m1}", "MODULUS")
    except Exception as e:
        record("Modulus: |w|^2_i1 = z1^2 + z2^2, others stay in their subalgebra", False, 0, str(e), "MODULUS")

    # 8. Inverse agrees with the conjugate formula
    try:
        (inv, lat) = timed(lambda: a.inverse())
        oracle = bc.inverse_by_conjugate(a)
        ok = inv.allclose(oracle, rtol=1e-10, atol=1e-10) and (a * inv).allclose(ONE + Bicomplex(np.zeros(200)), 1e-10, 1e-10)
        record("Inverse: idempotent inverse matches w^dagger2 / |w|^2_i1", ok, lat, "200 random elements", "INVERSE")
    except Exception as e:
        record("Inverse: idempotent inverse matches w^dagger2 / |w|^2_i1", False, 0, str(e), "INVERSE")

    # 9. Zero divisors
    try:
        divisor = ONE + J
        raised = False
        try:
            divisor.inverse()
        except NullConeError:
            raised = True
        ok = raised and divisor.is_null_cone() and not Bicomplex(1.0, 1.0).is_null_cone() and E1 * E2 == ZERO
        record("Null cone: 1 + j is a zero divisor and has no inverse", ok, 0, f"raised={raised}", "INVERSE")
    except Exception as e:
        record("Null cone: 1 + j is a zero divisor and has no inverse", False, 0, str(e), "INVERSE")

    # 10. Sc / Vec reassemble w in every representation
    try:
        gaps = {}
        for axis in Axis:
            rebuilt = a.sc(axis) + a.vec(axis) * bc.COMPLEMENT[axis]
            gaps[axis.value] = float(np.max((rebuilt - a).norm()))
        ok = max(gaps.values()) < 1e-14
        record("Representation: w = Sc(w) + Vec(w) u for i1, i2, j", ok, 0, f"Gaps: {gaps}", "ALGEBRA")
    except Exception as e:
        record("Representation: w = Sc(w) + Vec(w) u for i1, i2, j", False, 0, str(e), "ALGEBRA")

    # 11. pi swaps i1 and i2 and is a ring automorphism
    try:
        ok = I1.pi() == I2 and J.pi() == J and (a * b).pi().allclose(a.pi() * b.pi()) and a.pi().pi() == a
        record("pi: swaps i1 and i2, multiplicative, involutive", ok, 0, f"pi(i1)={I1.pi()}", "ALGEBRA")
    except Exception as e:
        record("pi: swaps i1 and i2, multiplicative, involutive", False, 0, str(e), "ALGEBRA")

    # 12. Elementary functions
    try:
        small_a, small_b = a.scale(0.3), b.scale(0.3)
        ok = bc.exp(small_a + small_b).allclose(bc.exp(small_a) * bc.exp(small_b), 1e-11, 1e-11)
        pythagoras = bc.sin(small_a) * bc.sin(small_a) + bc.cos(small_a) * bc.cos(small_a)
        ok = ok and pythagoras.allclose(ONE + Bicomplex(np.zeros(200)), 1e-11, 1e-11)
        record("Elementary: exp(a+b) = exp a exp b, sin^2 + cos^2 = 1", ok, 0, "200 random elements", "ELEMENTARY")
    except Exception as e:
        record("Elementary: exp(a+b) = exp a exp b, sin^2 + cos^2 = 1", False, 0, str(e), "ELEMENTARY")

    # 13. Literal form
    try:
        w = Bicomplex(1.0, -2.0, 0.5, 3.0)
        text = bc.format_bicomplex(w)
        ok = text == "1.0 - 2.0*I1 + 0.5*I2 + 3.0*J" and bc.parse_bicomplex(text) == w
        ok = ok and bc.parse_bicomplex("I1 - J") == Bicomplex(0.0, 1.0, 0.0, -1.0)
        record("Literal: format and parse agree", ok, 0, f"Text: {text}", "LITERAL")
    except Exception as e:
        record("Literal: format and parse agree", False, 0, str(e), "LITERAL")

    # 14. Malformed literals are rejected
    try:
        rejected = 0
        for bad in ("", "1 + + I1", "2 I1", "1 + K"):
            try:
                bc.parse_bicomplex(bad)
            except DslSyntaxError:
                rejected += 1
        record("Literal: malformed input raises DslSyntaxError", rejected == 4, 0, f"Rejected {rejected}/4", "LITERAL")
    except Exception as e:
        record("Literal: malformed input raises DslSyntaxError", False, 0, str(e), "LITERAL")

    # 15. Conjugation fixes its own subalgebra
    try:
        ok = all(
            a.sc(axis).conjugate(axis.conjugation).allclose(a.sc(axis)) for axis in Axis
        ) and Axis.J.conjugation is Conjugation.D3
        record("Conjugation: each fixes its subalgebra pointwise", ok, 0, "i1->dagger2, i2->dagger1, j->dagger3",
               "CONJUGATION")
    except Exception as e:
        record("Conjugation: each fixes its subalgebra pointwise", False, 0, str(e), "CONJUGATION")

    # 16. Module-level operations
    try:
        w = Bicomplex(3.0, 0.0, 0.0, 4.0)
        pair = bc.to_idempotent(a)
        ok = bc.from_idempotent(pair).allclose(a) and bc.pi_map(I1) == I2
        ok = ok and abs(float(bc.euclid_norm(w)) - 5.0) < 1e-15 and bc.is_null_cone(ONE - J)
        try:
            bc.is_null_cone(w, tol=-1.0)
            ok = False
        except ValueError:
            pass
        record("Algebra: functional forms agree with the methods", ok, 0, "|3 + 4j| = 5", "ALGEBRA")
    except Exception as e:
        record("Algebra: functional forms agree with the methods", False, 0, str(e), "ALGEBRA")

    # 17. pi exchanges dagger1 and dagger2 and commutes with division
    try:
        exchange = {
            "pi(w^dagger1) = pi(w)^dagger2": a.conjugate(1).pi() == a.pi().conjugate(2),
            "pi(w^dagger2) = pi(w)^dagger1": a.conjugate(2).pi() == a.pi().conjugate(1),
            "pi(w^dagger3) = pi(w)^dagger3": a.conjugate(3).pi() == a.pi().conjugate(3),
        }
        quotient_ok = (a / b).pi().allclose(a.pi() / b.pi(), rtol=1e-10, atol=1e-10)
        bad = [k for k, ok in exchange.items() if not ok]
        ok = not bad and quotient_ok and (I1 / (ONE + I2)).pi().allclose(I2 / (ONE + I1))
        record("pi: exchanges dagger1 and dagger2, pi(a / b) = pi(a) / pi(b)", ok, 0,
               f"Wrong: {bad}, quotient={quotient_ok}" if not ok else "200 random pairs", "ALGEBRA")
    except Exception as e:
        record("pi: exchanges dagger1 and dagger2, pi(a / b) = pi(a) / pi(b)", False, 0, str(e), "ALGEBRA")

    print_summary(
        get_results(),
        get_critical_failures(),
        "BICOMPLEX ARITHMETIC REPORT",
    )


if __name__ == "__main__":
    run()
