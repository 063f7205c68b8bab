"""JSON and CSV emission of residual reports."""

from __future__ import annotations

import csv
import io
import logging
import os
from typing import List, Optional, Sequence

import orjson

from errors import IoError
from schemas import ReportEnvelope, ResidualReport

logger = logging.getLogger("bvk.report_writer")

CSV_HEADER = (
    "suite",
    "case_id",
    "anchor",
    "grid",
    "chart",
    "points",
    "max_residual",
    "mean_residual",
    "tolerance",
    "passed",
    "wall_time",
    "error",
)


def to_json(reports: Sequence[ResidualReport]) -> bytes:
    envelope = ReportEnvelope(reports=list(reports))
    return orjson.dumps(envelope.model_dump(mode="json"), option=orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY)


def to_csv(reports: Sequence[ResidualReport]) -> bytes:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in reports:
        writer.writerow([
            r.suite,
            r.case_id,
            r.anchor,
            r.grid.spec if r.grid else "",
            r.grid.chart if r.grid else "",
            r.grid.points if r.grid else "",
            "" if r.max_residual is None else repr(r.max_residual),
            "" if r.mean_residual is None else repr(r.mean_residual),
            repr(r.tolerance),
            "true" if r.passed else "false",
            repr(r.wall_time),
            r.error or "",
        ])
    return buffer.getvalue().encode("utf-8")


def parse_json(data: bytes | str) -> List[ResidualReport]:
    """Reports from an emitted JSON document."""
    return ReportEnvelope.model_validate(orjson.loads(data)).reports


def emit_report(reports: Sequence[ResidualReport], fmt: str = "json", path: Optional[str] = None) -> bytes:
    """Serialize ``reports`` and write them to ``path`` when given ("-" or None keeps them in memory)."""
    if fmt == "json":
        payload = to_json(reports)
    elif fmt == "csv":
        payload = to_csv(reports)
    else:
        raise ValueError(f"unknown report format {fmt!r}")
    if path and path != "-":
        try:
            directory = os.path.dirname(os.path.abspath(path))
            os.makedirs(directory, exist_ok=True)
            with open(path, "wb") as handle:
                handle.write(payload)
        except OSError as exc:
            logger.error("Report write failed | path=%s | error=%s", path, exc)
            raise IoError(path, str(exc)) from exc
        logger.info("Report written | path=%s | format=%s | cases=%d", path, fmt, len(reports))
    return payload
