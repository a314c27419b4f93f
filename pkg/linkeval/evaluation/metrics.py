"""Hits@k and MRR over ranking records, and the report they are published in."""
from typing import Iterable, Sequence, Type, TypeVar

import numpy as np
import polars as pl
import ujson as json
from pydantic import BaseModel, Field

from core.errors import MetricError
from evaluation.ranking import RankingRecord

T = TypeVar("T", bound="BaseModel")


def _ranks(records: Sequence[RankingRecord]) -> np.ndarray:
    if not records:
        raise MetricError("cannot compute metrics over zero ranking records")
    return np.fromiter((r.rank for r in records), dtype=np.float64, count=len(records))


def hits_at_k(records: Sequence[RankingRecord], k: int) -> float:
    if k < 1:
        raise MetricError(f"k must be >= 1, got {k}")
    return float(np.mean(_ranks(records) <= k))


def mrr(records: Sequence[RankingRecord]) -> float:
    return float(np.mean(1.0 / _ranks(records)))


class Metrics(BaseModel):
    hits_at: dict[int, float] = Field(..., description="k -> fraction of tasks ranked within the top k.")
    mrr: float
    task_count: int


def summarize(records: Sequence[RankingRecord], ks: Iterable[int]) -> Metrics:
    return Metrics(
        hits_at={k: hits_at_k(records, k) for k in sorted(set(ks))},
        mrr=mrr(records),
        task_count=len(records),
    )


def mean_metrics(runs: Sequence[Metrics]) -> Metrics:
    """Unweighted arithmetic mean, key by key."""
    if not runs:
        raise MetricError("cannot average zero metric sets")
    ks = sorted(runs[0].hits_at)
    return Metrics(
        hits_at={k: float(np.mean([m.hits_at[k] for m in runs])) for k in ks},
        mrr=float(np.mean([m.mrr for m in runs])),
        task_count=runs[0].task_count,
    )


class MetricReport(BaseModel):
    dataset: str
    version: str
    model: str
    protocol: str
    hits_at: dict[int, float]
    mrr: float
    task_count: int
    per_direction: dict[str, Metrics] = Field(default_factory=dict, description="head / tail breakdown.")
    runs: int = Field(1, description="Evaluation runs averaged into the headline metrics.")
    run_metrics: list[Metrics] = Field(default_factory=list, description="Per-run metrics of the random protocol.")
    tie: str = "average"
    checksums: dict[str, str] = Field(default_factory=dict, description="Input files the report depends on.")
    averaged_over: list[str] = Field(default_factory=list, description="Versions in a cross-version average.")
    config: dict | None = None

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    @classmethod
    def from_json(cls: Type[T], json_str: str) -> T:
        return cls.model_validate(json.loads(json_str))

    @property
    def label(self) -> str:
        return f"{self.dataset} {self.version}".strip()


def average_reports(reports: Sequence[MetricReport]) -> MetricReport:
    """Unweighted mean over versions of one dataset, model and protocol (version ``avg``)."""
    if not reports:
        raise MetricError("cannot average zero reports")
    first = reports[0]
    for report in reports[1:]:
        if (report.model, report.protocol) != (first.model, first.protocol):
            raise MetricError(
                f"cannot average {report.model}/{report.protocol} with {first.model}/{first.protocol}"
            )
    if any(set(r.hits_at) != set(first.hits_at) for r in reports):
        raise MetricError("reports disagree on the k values")

    directions = set.intersection(*(set(r.per_direction) for r in reports))
    headline = mean_metrics([Metrics(hits_at=r.hits_at, mrr=r.mrr, task_count=r.task_count) for r in reports])
    datasets = sorted({r.dataset for r in reports})
    return MetricReport(
        dataset=datasets[0] if len(datasets) == 1 else "+".join(datasets),
        version="avg",
        model=first.model,
        protocol=first.protocol,
        hits_at=headline.hits_at,
        mrr=headline.mrr,
        task_count=sum(r.task_count for r in reports),
        per_direction={d: mean_metrics([r.per_direction[d] for r in reports]) for d in sorted(directions)},
        runs=first.runs,
        tie=first.tie,
        checksums={f"{r.version}:{name}": value for r in reports for name, value in r.checksums.items()},
        averaged_over=[r.version for r in reports],
        config=first.config,
    )


def reports_frame(reports: Iterable[MetricReport]) -> pl.DataFrame:
    """Long format: one row per (report, metric, k); ``k`` is null for MRR."""
    rows = []
    for report in reports:
        base = {
            "dataset": report.dataset,
            "version": report.version,
            "model": report.model,
            "protocol": report.protocol,
        }
        for k, value in sorted(report.hits_at.items()):
            rows.append({**base, "metric": "hits", "k": k, "value": value})
        rows.append({**base, "metric": "mrr", "k": None, "value": report.mrr})
    schema = {
        "dataset": pl.String,
        "version": pl.String,
        "model": pl.String,
        "protocol": pl.String,
        "metric": pl.String,
        "k": pl.Int64,
        "value": pl.Float64,
    }
    return pl.DataFrame(rows, schema=schema)
