"""Dataset statistics and their check against the published benchmark numbers."""
from typing import Type, TypeVar

import polars as pl
import ujson as json
from pydantic import BaseModel, Field

from kg.dataset import InductiveDataset, GraphSplits
from log import get_logger

logger = get_logger(__name__)

T = TypeVar("T", bound="BaseModel")

# (family, version) -> (#R, (train #E, train, valid, test), (test #E, inference, valid, test))
PUBLISHED_STATS: dict[tuple[str, str], tuple[int, tuple[int, int, int, int], tuple[int, int, int, int]]] = {
    ("FB15k-237", "v1"): (180, (1594, 4245, 489, 492), (1093, 1993, 206, 205)),
    ("FB15k-237", "v2"): (200, (2608, 9739, 1166, 1180), (1660, 4145, 469, 478)),
    ("FB15k-237", "v3"): (215, (3668, 17986, 2194, 2214), (2501, 7406, 866, 865)),
    ("FB15k-237", "v4"): (219, (4707, 27203, 3352, 3361), (3051, 11714, 1416, 1424)),
    ("WN18RR", "v1"): (9, (2746, 5410, 630, 638), (922, 1618, 185, 188)),
    ("WN18RR", "v2"): (10, (6954, 15262, 1838, 1868), (2757, 4011, 411, 441)),
    ("WN18RR", "v3"): (11, (12078, 25901, 3097, 3152), (5084, 6327, 538, 605)),
    ("WN18RR", "v4"): (9, (3861, 7940, 934, 968), (7084, 12334, 1394, 1429)),
    ("NELL-995", "v1"): (14, (3103, 4687, 414, 439), (225, 833, 101, 100)),
    ("NELL-995", "v2"): (88, (2564, 8219, 922, 968), (2086, 4586, 459, 476)),
    ("NELL-995", "v3"): (142, (4647, 16393, 1851, 1873), (3566, 8048, 811, 809)),
    ("NELL-995", "v4"): (76, (2092, 7546, 876, 867), (2795, 7073, 716, 731)),
}


class GraphStats(BaseModel):
    num_relations: int = Field(..., description="Relations occurring in the graph's triples.")
    num_entities: int = Field(..., description="Entities occurring in the graph's triples.")
    splits: dict[str, int] = Field(..., description="Triple count per split, in split order.")


class StatsReport(BaseModel):
    dataset: str
    version: str
    path: str
    num_relations: int = Field(..., description="#R of the version, i.e. the train graph's #R.")
    train_graph: GraphStats
    test_graph: GraphStats
    mismatches: list[str] = Field(default_factory=list, description="Differences to the published numbers.")
    config: dict | None = None

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    @classmethod
    def from_json(cls: Type[T], json_str: str) -> T:
        return cls.model_validate(json.loads(json_str))


def _graph_stats(graph_splits: GraphSplits) -> GraphStats:
    graph = graph_splits.graph
    return GraphStats(
        num_relations=len(graph.relation_ids()),
        num_entities=len(graph.entity_ids()),
        splits={name: len(triples) for name, triples in graph_splits.splits.items()},
    )


def compare_to_published(report: StatsReport) -> list[str]:
    """List differences to the published table; #R differences are expected upstream quirks."""
    published = PUBLISHED_STATS.get((report.dataset, report.version))
    if published is None:
        return []
    relations, train, test = published
    found = []
    if report.num_relations != relations:
        found.append(f"#R {report.num_relations} != published {relations}")
    for label, stats, expected in (("train", report.train_graph, train), ("test", report.test_graph, test)):
        actual = (stats.num_entities, *stats.splits.values())
        names = ("#E", *stats.splits)
        for name, got, want in zip(names, actual, expected):
            if got != want:
                found.append(f"{label} graph {name} {got} != published {want}")
    return found


def stats(dataset: InductiveDataset) -> StatsReport:
    train = _graph_stats(dataset.train_graph)
    report = StatsReport(
        dataset=dataset.name,
        version=dataset.version,
        path=str(dataset.path),
        num_relations=train.num_relations,
        train_graph=train,
        test_graph=_graph_stats(dataset.test_graph),
    )
    report.mismatches = compare_to_published(report)
    for mismatch in report.mismatches:
        if mismatch.startswith("#R"):
            logger.info(f"{dataset.label}: {mismatch}")
        else:
            logger.warning(f"{dataset.label}: {mismatch}")
    return report


def stats_frame(reports: list[StatsReport]) -> pl.DataFrame:
    """One row per graph, mirroring the published layout (train row, then test row)."""
    rows = []
    for report in reports:
        for graph, graph_stats in (("train", report.train_graph), ("test", report.test_graph)):
            counts = list(graph_stats.splits.values())
            rows.append(
                {
                    "dataset": report.dataset,
                    "version": report.version,
                    "graph": graph,
                    "num_relations": report.num_relations,
                    "graph_relations": graph_stats.num_relations,
                    "num_entities": graph_stats.num_entities,
                    "train": counts[0],
                    "valid": counts[1],
                    "test": counts[2],
                }
            )
    return pl.DataFrame(rows)


def render_table(reports: list[StatsReport]) -> str:
    header = ["Dataset", "Version", "Graph", "#R", "#E", "Train", "Valid", "Test"]
    body = [
        [
            row["dataset"],
            row["version"],
            row["graph"],
            str(row["num_relations"]) if row["graph"] == "train" else "",
            str(row["num_entities"]),
            str(row["train"]),
            str(row["valid"]),
            str(row["test"]),
        ]
        for row in stats_frame(reports).iter_rows(named=True)
    ] if reports else []
    widths = [max(len(cell) for cell in column) for column in zip(header, *body)]

    def fmt(cells: list[str]) -> str:
        return "  ".join(
            cell.ljust(width) if i < 3 else cell.rjust(width) for i, (cell, width) in enumerate(zip(cells, widths))
        ).rstrip()

    lines = [fmt(header), "  ".join("-" * w for w in widths)]
    lines.extend(fmt(row) for row in body)
    return "\n".join(lines)
