from __future__ import annotations

import logging
from typing import Optional

from fastapi import Depends, FastAPI, Header, HTTPException, Request, status
from fastapi.exceptions import RequestValidationError
from fastapi.responses import ORJSONResponse

from config import API_KEY_HEADER_NAME, EXPECTED_API_KEY
from errors import ConfigError
from main import setup_logging
from schemas import SuiteConfig, SuiteName, SuiteRequest, SuiteResponse
from suites import run_suite

setup_logging()

logger = logging.getLogger("bvk.api")

app = FastAPI(
    title="Bicomplex Vekua Verifier",
    version="1.0.0",
    default_response_class=ORJSONResponse,
)


@app.exception_handler(RequestValidationError)
async def validation_exception_handler(request: Request, exc: RequestValidationError):
    logger.warning("Validation failed: %s", exc.errors())
    return ORJSONResponse(
        status_code=422,
        content={
            "status": "error",
            "message": "Invalid request body",
            "details": exc.errors(),
        },
    )


@app.exception_handler(HTTPException)
async def http_exception_handler(request: Request, exc: HTTPException):
    logger.warning("HTTP error %s: %s", exc.status_code, exc.detail)
    return ORJSONResponse(
        status_code=exc.status_code,
        content={"status": "error", "message": exc.detail},
    )


@app.exception_handler(ConfigError)
async def config_exception_handler(request: Request, exc: ConfigError):
    logger.warning("Configuration rejected: %s", exc)
    return ORJSONResponse(
        status_code=422,
        content={"status": "error", "message": str(exc)},
    )


def verify_api_key(x_api_key: Optional[str] = Header(default=None, alias=API_KEY_HEADER_NAME)) -> None:
    # An unset key leaves the service open.
    if not EXPECTED_API_KEY:
        return
    if x_api_key != EXPECTED_API_KEY:
        logger.warning("Invalid or missing API key")
        raise HTTPException(
            status_code=status.HTTP_401_UNAUTHORIZED,
            detail="Invalid or missing API key",
        )


@app.post("/suites/{suite}", response_model=SuiteResponse)
def run_suite_endpoint(
    suite: SuiteName,
    body: Optional[SuiteRequest] = None,
    _: None = Depends(verify_api_key),
) -> SuiteResponse:
    overrides = body.model_dump(exclude_none=True) if body else {}
    cfg = SuiteConfig(suite=suite, **overrides)
    logger.info("Suite request | suite=%s | overrides=%s", suite, sorted(overrides))
    reports, code = run_suite(cfg)
    passed = sum(r.passed for r in reports)
    return SuiteResponse(
        status="success",
        exit_code=code,
        reports=reports,
        message=f"{passed}/{len(reports)} cases passed",
    )


@app.get("/health")
async def health() -> dict:
    logger.debug("Health check")
    return {"status": "ok"}


# Local run:
#   uvicorn api:app --host 0.0.0.0 --port 8080
