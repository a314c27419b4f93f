import logging
from pathlib import Path

import pytest

from core.errors import LinkEvalError, MissingSplitError
from kg.dataset import DatasetLayout, InductiveDataset, load_dataset, parse_benchmark_name
from kg.stats import GraphStats, StatsReport, compare_to_published, render_table, stats, stats_frame
from tests.test_utils import TOY_TEST_GRAPH, TOY_TRAIN_GRAPH, write_benchmark


def test_load_toy_dataset(toy_dataset: InductiveDataset):
    assert toy_dataset.name == "toy"
    assert toy_dataset.version == "v1"
    assert len(toy_dataset.train_graph["train"]) == 14
    assert len(toy_dataset.test_graph["inference"]) == 10
    assert len(toy_dataset.test_triples) == 3
    assert len(toy_dataset.test_graph.graph.entities) == 14
    assert len(toy_dataset.test_graph.membership) == 14


def test_rule_and_inference_views(toy_dataset: InductiveDataset):
    assert len(toy_dataset.rule_graph) == 14
    assert "lyon" in toy_dataset.rule_graph.entities
    assert len(toy_dataset.inference_graph) == 10
    assert toy_dataset.inference_graph.entities is toy_dataset.test_graph.graph.entities


def test_grail_layout(tmp_path):
    bench = write_benchmark(tmp_path, "nell_v1", TOY_TRAIN_GRAPH, TOY_TEST_GRAPH, layout="grail")
    dataset = load_dataset(bench, DatasetLayout.named("grail"))
    assert (dataset.name, dataset.version) == ("NELL-995", "v1")
    assert len(dataset.test_triples) == 3
    assert (tmp_path / "nell_v1_ind" / "train.txt").is_file()


def test_unknown_layout():
    with pytest.raises(LinkEvalError, match="Unknown layout"):
        DatasetLayout.named("flat")


def test_missing_split_is_named(toy_benchmark_dir: Path):
    (toy_benchmark_dir / "valid_ind.txt").unlink()
    with pytest.raises(MissingSplitError) as exc:
        load_dataset(toy_benchmark_dir)
    assert exc.value.split == "test_graph.valid"
    assert "missing split: test_graph.valid" in str(exc.value)


def test_missing_directory(tmp_path):
    with pytest.raises(LinkEvalError, match="not found"):
        load_dataset(tmp_path / "nope_v1")


@pytest.mark.parametrize(
    "name, expected",
    [
        ("fb237_v1", ("FB15k-237", "v1")),
        ("FB15k-237_v2", ("FB15k-237", "v2")),
        ("WN18RR_v4", ("WN18RR", "v4")),
        ("nell_v3", ("NELL-995", "v3")),
        ("toy_v1", ("toy", "v1")),
        ("custom", ("custom", "")),
    ],
)
def test_parse_benchmark_name(name, expected):
    assert parse_benchmark_name(Path("/data") / name) == expected


def test_leakage_between_graphs_is_warned_not_raised(tmp_path, caplog):
    test_graph = {**TOY_TEST_GRAPH, "test": TOY_TEST_GRAPH["test"] + [("paris", "capital", "france")]}
    bench = write_benchmark(tmp_path, "leaky_v1", TOY_TRAIN_GRAPH, test_graph)
    with caplog.at_level(logging.WARNING):
        dataset = load_dataset(bench)
    assert len(dataset.test_triples) == 4
    assert "occur in both train and test graph" in caplog.text


def test_split_overlap_is_warned(tmp_path, caplog):
    test_graph = {**TOY_TEST_GRAPH, "valid": TOY_TEST_GRAPH["valid"] + [TOY_TEST_GRAPH["test"][0]]}
    bench = write_benchmark(tmp_path, "overlap_v1", TOY_TRAIN_GRAPH, test_graph)
    with caplog.at_level(logging.WARNING):
        load_dataset(bench)
    assert "shared by valid and test" in caplog.text


def test_stats_of_toy_dataset(toy_dataset: InductiveDataset):
    report = stats(toy_dataset)
    assert report.num_relations == 3
    assert report.train_graph.num_entities == 15
    assert report.train_graph.splits == {"train": 14, "valid": 1, "test": 1}
    assert report.test_graph.splits == {"inference": 10, "valid": 1, "test": 3}
    assert report.mismatches == []
    assert StatsReport.from_json(report.to_json()) == report


def _fb237_v1_report(test_entities: int) -> StatsReport:
    return StatsReport(
        dataset="FB15k-237",
        version="v1",
        path="fb237_v1",
        num_relations=183,
        train_graph=GraphStats(num_relations=183, num_entities=1594, splits={"train": 4245, "valid": 489, "test": 492}),
        test_graph=GraphStats(
            num_relations=142, num_entities=test_entities, splits={"inference": 1993, "valid": 206, "test": 205}
        ),
    )


def test_compare_to_published_separates_relation_count():
    assert compare_to_published(_fb237_v1_report(1093)) == ["#R 183 != published 180"]
    mismatches = compare_to_published(_fb237_v1_report(1092))
    assert "test graph #E 1092 != published 1093" in mismatches


def test_stats_table_has_two_rows_per_version(toy_dataset: InductiveDataset):
    reports = [stats(toy_dataset), stats(toy_dataset)]
    frame = stats_frame(reports)
    assert frame.height == 4
    assert frame["graph"].to_list() == ["train", "test", "train", "test"]
    lines = render_table(reports).splitlines()
    assert lines[0].split()[:3] == ["Dataset", "Version", "Graph"]
    assert len(lines) == 2 + 4
