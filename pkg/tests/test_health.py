"""
Health and suite endpoint tests for the HTTP service.
Verifies GET /health and that POST /suites/{suite} runs a suite and
returns its reports.

Run standalone:  python tests/test_health.py
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

from tests.helpers import (  # noqa: E402
    API_KEY,
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

from config import REPORT_SCHEMA_VERSION  # noqa: E402
from schemas import SuiteResponse  # noqa: E402

HEADERS = {"x-api-key": API_KEY}


def run() -> None:
    """Execute all health and suite endpoint tests."""
    clear_results()
    client = api_client()

    section("HEALTH AND SUITE ENDPOINT TESTS")

    # 1. GET /health returns 200 with status ok
    try:
        r, lat = timed(lambda: client.get("/health"))
        ok = r.status_code == 200 and r.json().get("status") == "ok"
        record("Health: GET /health -> 200 ok", ok, lat, f"Status: {r.status_code}, body: {r.json()}", "HEALTH")
    except Exception as e:
        record("Health: GET /health -> 200 ok", False, 0, str(e), "HEALTH")

    # 2. Health works without a key
    try:
        r = client.get("/health", headers={})
        record("Health: works without x-api-key", r.status_code == 200, 0, f"Status: {r.status_code}", "HEALTH")
    except Exception as e:
        record("Health: works without x-api-key", False, 0, str(e), "HEALTH")

    # 3. Content-Type is JSON
    try:
        ct = client.get("/health").headers.get("content-type", "")
        record("Health: Content-Type is JSON", "application/json" in ct, 0, f"Content-Type: {ct}", "HEALTH")
    except Exception as e:
        record("Health: Content-Type is JSON", False, 0, str(e), "HEALTH")

    # 4. Algebra suite over HTTP
    try:
        r, lat = timed(lambda: client.post("/suites/algebra", json={"grid": TINY_GRID, "seed": 5}, headers=HEADERS))
        body = SuiteResponse.model_validate(r.json())
        failed = [rep.case_id for rep in body.reports if not rep.passed]
        ok = (
            r.status_code == 200
            and body.status == "success"
            and body.exit_code == 0
            and body.schema_version == REPORT_SCHEMA_VERSION
            and len(body.reports) > 0
            and not failed
        )
        record("Suites: POST /suites/algebra runs the suite", ok, lat,
               f"{body.message}, failed: {failed}", "SUITES")
    except Exception as e:
        record("Suites: POST /suites/algebra runs the suite", False, 0, str(e), "SUITES")

    # 5. Same seed over HTTP, same residuals
    try:
        request = {"grid": TINY_GRID, "seed": 5}
        runs = [client.post("/suites/algebra", json=request, headers=HEADERS).json()["reports"] for _ in range(2)]
        residuals = [[(rep["case_id"], rep["max_residual"]) for rep in reports] for reports in runs]
        record("Suites: fixed seed gives identical residuals", residuals[0] == residuals[1], 0,
               f"{len(residuals[0])} cases", "SUITES")
    except Exception as e:
        record("Suites: fixed seed gives identical residuals", False, 0, str(e), "SUITES")

    # 6. A tolerance override is applied to every case
    try:
        r = client.post("/suites/algebra", json={"grid": TINY_GRID, "tol": 1e-300}, headers=HEADERS)
        body = r.json()
        ok = (
            r.status_code == 200
            and body["exit_code"] == 1
            and all(rep["tolerance"] == 1e-300 for rep in body["reports"])
        )
        record("Suites: tol override reaches every report", ok, 0, body.get("message", ""), "SUITES")
    except Exception as e:
        record("Suites: tol override reaches every report", False, 0, str(e), "SUITES")

    print_summary(
        get_results(),
        get_critical_failures(),
        "HEALTH AND SUITE ENDPOINT REPORT",
    )


if __name__ == "__main__":
    run()
