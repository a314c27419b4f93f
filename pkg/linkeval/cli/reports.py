"""Artifact writers; every artifact carries the RunConfig that produced it."""
from pathlib import Path
from typing import Iterable

import polars as pl
from pydantic import BaseModel

from core.config import RunConfig
from evaluation.metrics import MetricReport
from log import get_logger

logger = get_logger(__name__)


def write_json(path: Path, report: BaseModel, config: RunConfig) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    if "config" in type(report).model_fields:
        report = report.model_copy(update={"config": config.as_meta()})
    path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")
    logger.info(f"wrote {path}")
    return path


def write_text(path: Path, text: str, config: RunConfig) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    body = "\n".join([*config.header_lines(), text.rstrip("\n")]) + "\n"
    path.write_text(body, encoding="utf-8")
    logger.info(f"wrote {path}")
    return path


def write_csv(path: Path, frame: pl.DataFrame, config: RunConfig) -> Path:
    return write_text(path, frame.write_csv(), config)


def metrics_table(reports: Iterable[MetricReport]) -> str:
    reports = list(reports)
    ks = sorted({k for r in reports for k in r.hits_at})
    header = ["Dataset", "Version", "Model", "Protocol", *(f"Hits@{k}" for k in ks), "MRR", "Tasks"]
    body = [
        [
            r.dataset,
            r.version,
            r.model,
            r.protocol,
            *(f"{r.hits_at[k]:.3f}" if k in r.hits_at else "" for k in ks),
            f"{r.mrr:.3f}",
            str(r.task_count),
        ]
        for r in reports
    ]
    widths = [max(len(cell) for cell in column) for column in zip(header, *body)]

    def fmt(cells: list[str]) -> str:
        return "  ".join(
            cell.ljust(width) if i < 4 else cell.rjust(width) for i, (cell, width) in enumerate(zip(cells, widths))
        ).rstrip()

    return "\n".join([fmt(header), "  ".join("-" * w for w in widths), *(fmt(row) for row in body)])
