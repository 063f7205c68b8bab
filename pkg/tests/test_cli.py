"""
Command-line and report writer tests.
Verifies exit codes, deterministic reports for a fixed seed, JSON and CSV
emission and the handling of unwritable report paths.

Run standalone:  python tests/test_cli.py
"""

import os
import sys
import tempfile

# ── Windows UTF-8 fix ────────────────────────────────────────────────────────
os.environ["PYTHONIOENCODING"] = "utf-8"
if sys.platform == "win32":
    sys.stdout.reconfigure(encoding="utf-8", errors="replace")
    sys.stderr.reconfigure(encoding="utf-8", errors="replace")

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))
sys.path.insert(0, os.path.dirname(__file__))

from tests.helpers import (  # noqa: E402
    TINY_GRID,
    clear_results,
    get_critical_failures,
    get_results,
    print_summary,
    record,
    section,
    timed,
)

from errors import ConfigError, IoError  # noqa: E402
from main import main, parse_config  # noqa: E402
from report_writer import CSV_HEADER, emit_report, parse_json  # noqa: E402
from schemas import ResidualReport  # noqa: E402
from suites import EXIT_CONFIG, EXIT_FAILED, EXIT_OK  # noqa: E402


def _stable(reports):
    return [r.model_dump(exclude={"wall_time"}) for r in reports]


def _sample_reports():
    ok = ResidualReport(anchor="identity", max_residual=1e-15, mean_residual=1e-16, tolerance=1e-12, passed=True,
                        suite="algebra", case_id="algebra.sample")
    bad = ResidualReport(anchor="broken", tolerance=1e-12, passed=False, error="EvaluationError: non-finite residual",
                         suite="algebra", case_id="algebra.broken")
    return [ok, bad]


def run() -> None:
    """Execute all command-line tests."""
    clear_results()
    workdir = tempfile.mkdtemp(prefix="bvk-cli-")

    section("COMMAND LINE TESTS")

    # 1. Same seed, same reports
    try:
        paths = [os.path.join(workdir, f"run{k}.json") for k in (1, 2)]
        codes = []
        lat = 0
        for path in paths:
            code, lat = timed(lambda path=path: main(["--suite", "algebra", "--grid", TINY_GRID, "--seed", "1",
                                                      "--out", path]))
            codes.append(code)
        runs = []
        for path in paths:
            with open(path, "rb") as handle:
                runs.append(parse_json(handle.read()))
        ok = codes[0] == codes[1] and codes[0] in (EXIT_OK, EXIT_FAILED) and _stable(runs[0]) == _stable(runs[1])
        ok = ok and len(runs[0]) > 0 and all(r.suite == "algebra" for r in runs[0])
        record("CLI: fixed seed gives identical reports", ok, lat, f"Codes: {codes}, cases: {len(runs[0])}", "CLI")
    except Exception as e:
        record("CLI: fixed seed gives identical reports", False, 0, str(e), "CLI")

    # 2. The algebra suite passes on a small grid
    try:
        path = os.path.join(workdir, "algebra.json")
        code = main(["--suite", "algebra", "--grid", TINY_GRID, "--out", path])
        with open(path, "rb") as handle:
            reports = parse_json(handle.read())
        failed = [r.case_id for r in reports if not r.passed]
        record("CLI: algebra suite exits 0", code == EXIT_OK and not failed, 0,
               f"Failed: {failed}" if failed else f"{len(reports)} cases", "CLI")
    except Exception as e:
        record("CLI: algebra suite exits 0", False, 0, str(e), "CLI")

    # 3. Configuration errors exit 2
    try:
        codes = {
            "bad grid": main(["--suite", "algebra", "--grid", "x=1:-1:5"]),
            "negative tol": main(["--suite", "algebra", "--grid", TINY_GRID, "--tol", "-1"]),
            "bad f0": main(["--suite", "schrodinger", "--grid", TINY_GRID, "--f0", "exp(z1"]),
            "refine too deep": main(["--suite", "algebra", "--grid", TINY_GRID, "--refine", "9"]),
        }
        ok = all(c == EXIT_CONFIG for c in codes.values())
        record("CLI: invalid configuration exits 2", ok, 0, f"{codes}", "CLI")
    except Exception as e:
        record("CLI: invalid configuration exits 2", False, 0, str(e), "CLI")

    # 4. parse_config maps validation errors to ConfigError
    try:
        cfg = parse_config(["--suite", "calculus", "--plane", "D", "--seed", "3"])
        raised = False
        try:
            parse_config(["--tol", "0"])
        except ConfigError:
            raised = True
        ok = cfg.suite == "calculus" and cfg.plane == "d" and cfg.seed == 3 and raised
        record("CLI: options become a SuiteConfig", ok, 0, f"plane={cfg.plane}", "CLI")
    except Exception as e:
        record("CLI: options become a SuiteConfig", False, 0, str(e), "CLI")

    # 5. A tolerance override that no case can meet exits 1
    try:
        code = main(["--suite", "algebra", "--grid", TINY_GRID, "--tol", "1e-300",
                     "--out", os.path.join(workdir, "strict.json")])
        record("CLI: failed cases exit 1", code == EXIT_FAILED, 0, f"Exit: {code}", "CLI")
    except Exception as e:
        record("CLI: failed cases exit 1", False, 0, str(e), "CLI")

    # 6. JSON documents parse back
    try:
        reports = _sample_reports()
        back = parse_json(emit_report(reports, "json"))
        ok = _stable(back) == _stable(reports) and back[1].max_residual is None and not back[1].passed
        record("Report: JSON parses back to the same reports", ok, 0, f"{len(back)} reports", "REPORT")
    except Exception as e:
        record("Report: JSON parses back to the same reports", False, 0, str(e), "REPORT")

    # 7. CSV layout
    try:
        lines = emit_report(_sample_reports(), "csv").decode("utf-8").splitlines()
        header = lines[0].split(",")
        ok = tuple(header) == CSV_HEADER and len(lines) == 3 and ",false," in lines[2] and ",true," in lines[1]
        record("Report: CSV has the fixed header and one row per case", ok, 0, lines[0], "REPORT")
    except Exception as e:
        record("Report: CSV has the fixed header and one row per case", False, 0, str(e), "REPORT")

    # 8. Unwritable paths
    try:
        blocker = os.path.join(workdir, "blocker")
        with open(blocker, "w") as handle:
            handle.write("")
        target = os.path.join(blocker, "nested", "out.json")
        raised = False
        try:
            emit_report(_sample_reports(), "json", target)
        except IoError:
            raised = True
        code = main(["--suite", "algebra", "--grid", TINY_GRID, "--out", target])
        ok = raised and code == EXIT_CONFIG
        record("Report: unwritable path raises IoError and exits 2", ok, 0, f"Exit: {code}", "REPORT")
    except Exception as e:
        record("Report: unwritable path raises IoError and exits 2", False, 0, str(e), "REPORT")

    print_summary(
        get_results(),
        get_critical_failures(),
        "COMMAND LINE REPORT",
    )


if __name__ == "__main__":
    run()
