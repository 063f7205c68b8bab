"""
Stress tests for the verification suites.
Runs whole suites on small grids, checks refinement, large random batches
and concurrent HTTP requests against generous time limits.

Run standalone:  python tests/test_stress.py
"""

import os
import sys
from concurrent.futures import ThreadPoolExecutor, as_completed

# ── Windows UTF-8 fix ────────────────────────────────────────────────────────
os.environ["PYTHONIOENCODING"] = "utf-8"
if sys.platform == "win32":
    sys.stdout.reconfigure(encoding="utf-8", errors="replace")
    sys.stderr.reconfigure(encoding="utf-8", errors="replace")

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))
sys.path.insert(0, os.path.dirname(__file__))

import numpy as np  # noqa: E402

from tests.helpers import (  # noqa: E402
    API_KEY,
    SMALL_GRID,
    TINY_GRID,
    api_client,
    clear_results,
    get_critical_failures,
    get_results,
    print_summary,
    record,
    section,
    timed,
)

import bicomplex as bc  # noqa: E402
from schemas import SuiteConfig  # noqa: E402
from suites import EXIT_OK, build_grid, run_suite  # noqa: E402

SUITE_LIMIT_MS = 120_000


def _suite(name: str, grid: str, **extra):
    return timed(lambda: run_suite(SuiteConfig(suite=name, grid=grid, seed=3, **extra)))


def run() -> None:
    """Execute all stress tests."""
    clear_results()

    section("STRESS TESTS")

    # 1-4. Every suite on a small grid
    for name in ("algebra", "calculus", "pseudoanalytic", "schrodinger"):
        try:
            (reports, code), lat = _suite(name, SMALL_GRID)
            failed = [r.case_id for r in reports if not r.passed]
            ok = code == EXIT_OK and not failed and lat < SUITE_LIMIT_MS
            record(f"Suite: {name} passes on a 5^4 grid", ok, lat,
                   f"Failed: {failed[:5]}" if failed else f"{len(reports)} cases", "SUITES")
        except Exception as e:
            record(f"Suite: {name} passes on a 5^4 grid", False, 0, str(e), "SUITES")

    # 5. Case ids are unique across the full run
    try:
        (reports, _), lat = _suite("all", TINY_GRID)
        ids = [r.case_id for r in reports]
        suites = {r.suite for r in reports}
        ok = len(ids) == len(set(ids)) and suites == {"algebra", "calculus", "pseudoanalytic", "schrodinger"}
        record("Suite: all runs every suite with unique case ids", ok, lat, f"{len(ids)} cases", "SUITES")
    except Exception as e:
        record("Suite: all runs every suite with unique case ids", False, 0, str(e), "SUITES")

    # 6. Refinement halves the spacing
    try:
        grid = build_grid(SuiteConfig(grid=TINY_GRID, refine=2))
        ok = grid.shape == (9, 9, 9, 9) and abs(grid.spacing()["x"] - 0.25) < 1e-15
        record("Grid: refine=2 maps 3 samples to 9", ok, 0, f"Shape: {grid.shape}", "GRID")
    except Exception as e:
        record("Grid: refine=2 maps 3 samples to 9", False, 0, str(e), "GRID")

    # 7. Plane restriction in the calculus suite
    try:
        (reports, code), lat = _suite("calculus", TINY_GRID, plane="d")
        planes = {r.detail.get("plane") for r in reports if r.detail.get("plane")}
        ok = code == EXIT_OK and planes <= {"D"}
        record("Suite: plane=d keeps only hyperbolic plane checks", ok, lat, f"Planes: {planes}", "SUITES")
    except Exception as e:
        record("Suite: plane=d keeps only hyperbolic plane checks", False, 0, str(e), "SUITES")

    # 8. Large random batch
    try:
        rng = np.random.default_rng(99)

        def batch():
            a = bc.random_bicomplex(rng, 200_000)
            b = bc.random_bicomplex(rng, 200_000)
            return (a * b).p1 - a.p1 * b.p1

        gap, lat = timed(batch)
        worst = float(np.max(np.abs(gap)))
        record("Arithmetic: 200k products are vectorized", worst < 1e-10 and lat < 10_000, lat,
               f"Max gap: {worst:.2e}", "ARITHMETIC")
    except Exception as e:
        record("Arithmetic: 200k products are vectorized", False, 0, str(e), "ARITHMETIC")

    # 9. Concurrent HTTP requests
    try:
        client = api_client()

        def call(seed: int):
            r = client.post("/suites/algebra", json={"grid": TINY_GRID, "seed": seed}, headers={"x-api-key": API_KEY})
            return r.status_code, r.json().get("exit_code")

        def fan_out():
            with ThreadPoolExecutor(max_workers=4) as pool:
                futures = [pool.submit(call, seed) for seed in range(8)]
                return [f.result() for f in as_completed(futures)]

        outcomes, lat = timed(fan_out)
        ok = all(status == 200 and code == EXIT_OK for status, code in outcomes)
        record("HTTP: 8 concurrent suite requests succeed", ok, lat, f"Outcomes: {outcomes}", "HTTP")
    except Exception as e:
        record("HTTP: 8 concurrent suite requests succeed", False, 0, str(e), "HTTP")

    print_summary(
        get_results(),
        get_critical_failures(),
        "STRESS TEST REPORT",
    )


if __name__ == "__main__":
    run()
