from __future__ import annotations

import argparse
import logging
import os
import sys
from typing import List, Optional

from pydantic import ValidationError

from config import LOG_DIR, LOG_LEVEL
from errors import BvkError, ConfigError
from report_writer import emit_report
from schemas import SuiteConfig
from suites import EXIT_CONFIG, run_suite

LOG_FILE = f"{LOG_DIR}/error.log"

logger = logging.getLogger("bvk")


def setup_logging() -> None:
    os.makedirs(LOG_DIR, exist_ok=True)
    logging.basicConfig(
        level=getattr(logging, LOG_LEVEL, logging.INFO),
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )
    root = logging.getLogger()
    if any(isinstance(h, logging.FileHandler) and h.baseFilename == os.path.abspath(LOG_FILE) for h in root.handlers):
        return
    # Warnings and errors also go to a file for unattended CI runs.
    file_handler = logging.FileHandler(LOG_FILE)
    file_handler.setLevel(logging.WARNING)
    file_handler.setFormatter(logging.Formatter(
        "%(asctime)s [%(levelname)s] %(name)s: %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    ))
    root.addHandler(file_handler)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bivekua",
        description="Verify bicomplex Vekua and Schrödinger identities on sample grids.",
    )
    parser.add_argument("--suite", default="all",
                        choices=["algebra", "calculus", "pseudoanalytic", "schrodinger", "all"])
    parser.add_argument("--grid", help='per-axis ranges, e.g. "x=-1:1:9,y=-1:1:9,p=-1:1:9,q=-1:1:9"')
    parser.add_argument("--plane", help="restrict plane checks to c2 or d")
    parser.add_argument("--f0", help="catalog name or DSL expression for f0")
    parser.add_argument("--pair", help="catalog name or 'F,G' in the DSL")
    parser.add_argument("--w", help="catalog name or DSL expression for a test function")
    parser.add_argument("--tol", type=float, help="tolerance applied to every case")
    parser.add_argument("--seed", type=int, help="seed for random elements")
    parser.add_argument("--refine", type=int, default=0, help="halve the grid spacing this many times")
    parser.add_argument("--out", help="report file (stdout when omitted)")
    parser.add_argument("--format", default="json", choices=["json", "csv"])
    return parser


def parse_config(argv: Optional[List[str]] = None) -> SuiteConfig:
    args = build_parser().parse_args(argv)
    values = {k: v for k, v in vars(args).items() if v is not None}
    try:
        return SuiteConfig(**values)
    except ValidationError as exc:
        raise ConfigError(f"invalid configuration: {exc.errors(include_url=False)}") from exc


def main(argv: Optional[List[str]] = None) -> int:
    setup_logging()
    try:
        cfg = parse_config(argv)
        reports, code = run_suite(cfg)
        payload = emit_report(reports, cfg.format, cfg.out)
    except ConfigError as exc:
        logger.warning("Configuration rejected | error=%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except BvkError as exc:
        logger.error("Run aborted | error_type=%s | error=%s", type(exc).__name__, exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if not cfg.out or cfg.out == "-":
        sys.stdout.buffer.write(payload)
        sys.stdout.buffer.write(b"\n")
    passed = sum(r.passed for r in reports)
    print(f"{passed}/{len(reports)} cases passed", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
