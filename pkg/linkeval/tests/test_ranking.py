import math

import numpy as np
import pytest
import ujson as json

from core.errors import PredictionFileError
from evaluation.harness import evaluate
from evaluation.protocols import NonSampling
from kg.dataset import InductiveDataset, load_dataset
from kg.tasks import CompletionTask, Direction, completion_tasks
from ranking.baseline import BaselineModel, RandomModel, baseline_score
from ranking.predictions import PredictionModel, ingest_predictions
from rules.apply import TypeScores, apply_rules
from rules.learner import learn_rules
from tests.test_utils import random_benchmark


def _baseline(dataset: InductiveDataset) -> BaselineModel:
    return BaselineModel(apply_rules(learn_rules(dataset.rule_graph), dataset.inference_graph))


def test_baseline_scores_the_open_slot(toy_dataset: InductiveDataset):
    model = _baseline(toy_dataset)
    graph = toy_dataset.test_graph.graph
    task = completion_tasks(toy_dataset.test_triples)[0]
    assert graph.decode(task.triple) == ("madrid", "capital", "spain")

    scored = model.score(task)
    assert scored.score(graph.entities.id_of("germany")) == 1.0
    assert scored.score(graph.entities.id_of("lazio")) == pytest.approx(3 / 7)
    assert scored.score(graph.entities.id_of("spain")) == 0.0
    dense = scored.dense(len(graph.entities))
    assert dense.shape == (14,)
    assert dense[graph.entities.id_of("italy")] == 1.0


def test_baseline_ignores_the_anchor(toy_dataset: InductiveDataset):
    model = _baseline(toy_dataset)
    capital = toy_dataset.test_graph.graph.relations.id_of("capital")
    a = model.score(CompletionTask(Direction.TAIL, capital, 0, 1))
    b = model.score(CompletionTask(Direction.TAIL, capital, 5, 1))
    assert a.scores == b.scores
    assert baseline_score(CompletionTask(Direction.TAIL, 99, 0, 1), model.type_scores).scores == {}


@pytest.mark.parametrize("seed", range(5))
def test_rescaled_confidences_keep_every_preference(tmp_path, seed):
    dataset = load_dataset(random_benchmark(tmp_path, "rand_v1", seed))
    original = _baseline(dataset)
    # sqrt(c) / 2 is strictly increasing and keeps 0 at 0
    rescaled = BaselineModel(
        TypeScores(
            scores={
                slot: {e: math.sqrt(c) / 2 for e, c in values.items()}
                for slot, values in original.type_scores.scores.items()
            },
            provenance=original.type_scores.provenance,
        )
    )
    size = len(dataset.test_graph.graph.entities)
    for task in completion_tasks(dataset.test_triples):
        a = original.score(task).dense(size)
        b = rescaled.score(task).dense(size)
        assert np.array_equal(np.sign(a[:, None] - a[None, :]), np.sign(b[:, None] - b[None, :]))

    before = evaluate(original, dataset, NonSampling(), ks=[1, 3, 10])
    after = evaluate(rescaled, dataset, NonSampling(), ks=[1, 3, 10])
    assert after.hits_at == before.hits_at
    assert after.mrr == before.mrr


def test_random_model_is_reproducible():
    task = CompletionTask(Direction.HEAD, 2, 3, 4)
    first = RandomModel(20, seed=7).score(task)
    again = RandomModel(20, seed=7).score(task)
    other = RandomModel(20, seed=8).score(task)
    assert first.scores == again.scores
    assert first.scores != other.scores
    assert all(0.0 <= v < 1.0 for v in first.scores.values())


def _write_predictions(path, records):
    path.write_text("".join(json.dumps(r) + "\n" for r in records), encoding="utf-8")
    return path


def _full_records(dataset: InductiveDataset):
    graph = dataset.test_graph.graph
    return [
        {"triple": list(graph.decode(t)), "heads": [[graph.decode(t)[0], 0.9]], "tails": [[graph.decode(t)[2], 0.8]]}
        for t in dataset.test_triples
    ]


def test_ingest_predictions(tmp_path, toy_dataset: InductiveDataset):
    path = _write_predictions(tmp_path / "model.jsonl", _full_records(toy_dataset))
    scored = ingest_predictions(path, toy_dataset)
    assert len(scored) == 6
    assert [s.task for s in scored] == completion_tasks(toy_dataset.test_triples)
    assert scored[0].score(scored[0].task.truth) == 0.8
    assert scored[1].score(scored[1].task.truth) == 0.9
    assert scored[0].score(scored[0].task.anchor) == -math.inf

    model = PredictionModel.from_file(path, toy_dataset)
    assert model.name == "model"
    assert model.score(scored[3].task) is not None


@pytest.mark.parametrize(
    "mutate, message",
    [
        (lambda rs: rs[:-1], "without predictions"),
        (lambda rs: rs + rs[:1], "listed twice"),
        (lambda rs: [{**rs[0], "heads": [["atlantis", 1.0]]}] + rs[1:], "unknown entity"),
        (lambda rs: [{**rs[0], "tails": [["spain", "high"]]}] + rs[1:], "not a number"),
        (lambda rs: [{**rs[0], "tails": [["spain", 1.0], ["spain", 2.0]]}] + rs[1:], "duplicate entity"),
        (lambda rs: [{**rs[0], "triple": ["berlin", "capital", "germany"]}] + rs[1:], "not in the test split"),
    ],
)
def test_ingest_rejects_bad_files(tmp_path, toy_dataset: InductiveDataset, mutate, message):
    path = _write_predictions(tmp_path / "bad.jsonl", mutate(_full_records(toy_dataset)))
    with pytest.raises(PredictionFileError, match=message):
        ingest_predictions(path, toy_dataset)


def test_ingest_rejects_invalid_json(tmp_path, toy_dataset: InductiveDataset):
    path = tmp_path / "broken.jsonl"
    path.write_text("{not json\n", encoding="utf-8")
    with pytest.raises(PredictionFileError, match="invalid JSON"):
        ingest_predictions(path, toy_dataset)
