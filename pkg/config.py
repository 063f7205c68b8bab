import os

from dotenv import load_dotenv

load_dotenv()


def _optional_float(name: str) -> float | None:
    raw = os.getenv(name, "").strip()
    return float(raw) if raw else None


# Overrides every per-case tolerance when set (same effect as --tol).
TOLERANCE_OVERRIDE = _optional_float("BVK_TOL")

DEFAULT_SEED = int(os.getenv("BVK_SEED", "42"))

# Relative threshold tol * max(1, |w|^2) for zero divisors.
NULL_CONE_TOL = float(os.getenv("BVK_NULL_CONE_TOL", "1e-10"))

# f0 is rejected when min|f0| < F0_FLOOR * max|f0| on the grid.
F0_FLOOR = float(os.getenv("BVK_F0_FLOOR", "1e-6"))

LOG_LEVEL = os.getenv("BVK_LOG_LEVEL", "INFO").upper()
LOG_DIR = os.getenv("BVK_LOG_DIR", "/tmp/log")

API_KEY_HEADER_NAME = "x-api-key"
# Empty means the HTTP service runs without authentication.
EXPECTED_API_KEY = os.getenv("BVK_API_KEY", "")

REPORT_SCHEMA_VERSION = "1.0"
