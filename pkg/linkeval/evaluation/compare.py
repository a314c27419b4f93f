from typing import Sequence

import polars as pl

from core.errors import MetricError
from evaluation.metrics import MetricReport, reports_frame

DELTA_COLUMNS = ["model", "protocol", "metric", "k", "value", "delta", "dataset", "version"]
_CELL = ["dataset", "version", "protocol", "metric", "_k"]


def compare(reports: Sequence[MetricReport], reference_model: str, positions: bool = False) -> pl.DataFrame:
    """Per (model, protocol, metric) cell: value minus the reference model's value.

    Every cell must have a reference counterpart with the same dataset,
    version, protocol, metric and k. With ``positions`` a ``position`` column
    holds each model's standing in its cell, 1 for the highest value; equal
    values share the better position.
    """
    frame = reports_frame(reports).with_columns(pl.col("k").fill_null(-1).alias("_k"))
    reference = frame.filter(pl.col("model") == reference_model)
    if reference.is_empty():
        raise MetricError(f"reference model {reference_model!r} not among the reports")

    duplicated = frame.group_by(["model", *_CELL]).len().filter(pl.col("len") > 1)
    if not duplicated.is_empty():
        row = duplicated.row(0, named=True)
        raise MetricError(f"more than one report for {row['model']} {row['dataset']} {row['version']} {row['protocol']}")

    joined = frame.join(
        reference.select([*_CELL, pl.col("value").alias("_reference")]),
        on=_CELL,
        how="left",
    )
    missing = joined.filter(pl.col("_reference").is_null())
    if not missing.is_empty():
        row = missing.row(0, named=True)
        raise MetricError(
            f"no {reference_model} value for {row['dataset']} {row['version']} {row['protocol']} "
            f"{row['metric']}{'' if row['k'] is None else '@' + str(row['k'])} (model {row['model']})"
        )

    columns = DELTA_COLUMNS
    if positions:
        joined = joined.with_columns(
            pl.col("value").rank(method="min", descending=True).over(_CELL).cast(pl.Int64).alias("position")
        )
        columns = [*DELTA_COLUMNS, "position"]
    return (
        joined.with_columns((pl.col("value") - pl.col("_reference")).alias("delta"))
        .sort(["dataset", "version", "protocol", "model", "metric", "_k"])
        .select(columns)
    )
