"""
Pytest wiring for the script-style test modules.
Each tests/test_*.py exposes ``run()``, which records results through
tests.helpers rather than raising. Pytest collects ``run`` and this fixture
fails the item if any recorded check failed, matching tests/run_all.py.
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), ".."))
sys.path.insert(0, os.path.dirname(__file__))

from tests.helpers import clear_results, get_critical_failures  # noqa: E402


@pytest.fixture(autouse=True)
def _fail_on_recorded_failures():
    clear_results()
    yield
    failures = get_critical_failures()
    clear_results()
    if failures:
        lines = "\n".join(f"{f['test']}: {f['detail']}" for f in failures)
        pytest.fail(f"{len(failures)} recorded check(s) failed:\n{lines}", pytrace=False)
