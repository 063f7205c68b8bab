from __future__ import annotations

import math
import time
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from config import REPORT_SCHEMA_VERSION

SuiteName = Literal["algebra", "calculus", "pseudoanalytic", "schrodinger", "all"]
SUITES: Tuple[str, ...] = ("algebra", "calculus", "pseudoanalytic", "schrodinger")


def _finite_or_none(v: object) -> Optional[float]:
    if v is None:
        return None
    v = float(v)  # type: ignore[arg-type]
    return v if math.isfinite(v) else None


class GridMeta(BaseModel):
    spec: str
    chart: str = "cartesian"
    points: int


class ResidualReport(BaseModel):
    """One verified identity on one grid.

    ``max_residual`` is None when the case could not be evaluated; the error
    is then in ``error`` and the case fails.
    """

    model_config = ConfigDict(extra="ignore")

    suite: str = ""
    case_id: str = ""
    anchor: str
    grid: Optional[GridMeta] = None
    max_residual: Optional[float] = None
    mean_residual: Optional[float] = None
    tolerance: float
    passed: bool = False
    wall_time: float = 0.0
    detail: Dict[str, Any] = Field(default_factory=dict)
    error: Optional[str] = None

    @field_validator("max_residual", "mean_residual", mode="before")
    @classmethod
    def drop_non_finite(cls, v: object) -> Optional[float]:
        return _finite_or_none(v)

    @model_validator(mode="after")
    def pass_flag_matches_residual(self) -> ResidualReport:
        expected = self.max_residual is not None and self.error is None and self.max_residual <= self.tolerance
        if self.passed != expected:
            raise ValueError(
                f"passed={self.passed} contradicts max_residual={self.max_residual} "
                f"and tolerance={self.tolerance}"
            )
        return self

    @classmethod
    def measured(
        cls,
        anchor: str,
        grid: Optional[Dict[str, Any]],
        residual: Tuple[float, float],
        tolerance: float,
        started: float,
        detail: Optional[Dict[str, Any]] = None,
    ) -> ResidualReport:
        """Report for a residual (max, mean) measured since ``started`` (perf_counter)."""
        worst = _finite_or_none(residual[0])
        return cls(
            anchor=anchor,
            grid=GridMeta(**grid) if grid else None,
            max_residual=worst,
            mean_residual=residual[1],
            tolerance=tolerance,
            passed=worst is not None and worst <= tolerance,
            wall_time=round(time.perf_counter() - started, 6),
            detail=detail or {},
        )

    @classmethod
    def failed(cls, anchor: str, tolerance: float, error: str, started: float,
               grid: Optional[Dict[str, Any]] = None, detail: Optional[Dict[str, Any]] = None) -> ResidualReport:
        return cls(
            anchor=anchor,
            grid=GridMeta(**grid) if grid else None,
            tolerance=tolerance,
            passed=False,
            wall_time=round(time.perf_counter() - started, 6),
            detail=detail or {},
            error=error,
        )


class SuiteRequest(BaseModel):
    """Overrides accepted by the HTTP service and the command line."""

    model_config = ConfigDict(extra="forbid")

    grid: Optional[str] = None
    plane: Optional[Literal["c2", "d"]] = None
    f0: Optional[str] = None
    pair: Optional[str] = None
    w: Optional[str] = None
    tol: Optional[float] = Field(default=None, gt=0)
    seed: Optional[int] = None
    refine: int = Field(default=0, ge=0, le=4)

    @field_validator("plane", mode="before")
    @classmethod
    def normalize_plane(cls, v: object) -> object:
        if isinstance(v, str):
            return v.lower().strip()
        return v


class SuiteConfig(SuiteRequest):
    suite: SuiteName = "all"
    out: Optional[str] = None
    format: Literal["json", "csv"] = "json"


class ReportEnvelope(BaseModel):
    schema_version: str = REPORT_SCHEMA_VERSION
    reports: List[ResidualReport] = Field(default_factory=list)


class SuiteResponse(BaseModel):
    status: Literal["success", "error"]
    exit_code: int
    schema_version: str = REPORT_SCHEMA_VERSION
    reports: List[ResidualReport] = Field(default_factory=list)
    message: str = ""
