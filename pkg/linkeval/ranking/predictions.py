"""
Ingestion of externally computed scores.

One JSON object per line::

    {"triple": [s, p, o], "heads": [[entity, score], ...], "tails": [[entity, score], ...]}

Every test triple of the test graph must appear exactly once. Entities not
listed for a task score ``-inf``: below every listed entity, tied among
themselves. See ``docs/prediction_format.md``.
"""
import math
from pathlib import Path

import ujson as json

from core.errors import PredictionFileError
from kg.dataset import InductiveDataset
from kg.graph import KnowledgeGraph, Triple
from kg.tasks import CompletionTask, Direction, completion_tasks
from log import get_logger
from ranking.baseline import ScoredCandidates

logger = get_logger(__name__)

UNLISTED = float("-inf")


def _entity_scores(graph: KnowledgeGraph, pairs: object, where: str) -> dict[int, float]:
    if not isinstance(pairs, list):
        raise PredictionFileError(f"{where}: expected a list of [entity, score] pairs")
    scores: dict[int, float] = {}
    for pair in pairs:
        if not isinstance(pair, list) or len(pair) != 2:
            raise PredictionFileError(f"{where}: expected [entity, score], got {pair!r}")
        name, value = pair
        entity = graph.entities.get(str(name))
        if entity is None:
            raise PredictionFileError(f"{where}: unknown entity {name!r}")
        if entity in scores:
            raise PredictionFileError(f"{where}: duplicate entity {name!r}")
        try:
            score = float(value)
        except (TypeError, ValueError):
            raise PredictionFileError(f"{where}: score for {name!r} is not a number: {value!r}") from None
        if not math.isfinite(score):
            raise PredictionFileError(f"{where}: non-finite score for {name!r}: {value!r}")
        scores[entity] = score
    return scores


def ingest_predictions(path: Path | str, dataset: InductiveDataset, name: str | None = None) -> list[ScoredCandidates]:
    """Two ScoredCandidates per test triple, in test-split order (tail task, then head task)."""
    path = Path(path)
    source = name or path.stem
    graph = dataset.test_graph.graph
    expected = set(dataset.test_triples)
    by_triple: dict[Triple, tuple[dict[int, float], dict[int, float]]] = {}

    with path.open(encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            where = f"{path}:{lineno}"
            try:
                record = json.loads(line)
            except ValueError as e:
                raise PredictionFileError(f"{where}: invalid JSON: {e}") from e
            if not isinstance(record, dict) or "triple" not in record:
                raise PredictionFileError(f"{where}: missing 'triple'")
            raw = record["triple"]
            if not isinstance(raw, list) or len(raw) != 3:
                raise PredictionFileError(f"{where}: 'triple' must be [subject, relation, object]")
            s, p, o = (str(x) for x in raw)
            subject, relation, obj = graph.entities.get(s), graph.relations.get(p), graph.entities.get(o)
            if subject is None or obj is None:
                raise PredictionFileError(f"{where}: unknown entity in triple {raw!r}")
            if relation is None:
                raise PredictionFileError(f"{where}: unknown relation {p!r}")
            triple = Triple(subject, relation, obj)
            if triple not in expected:
                raise PredictionFileError(f"{where}: triple {raw!r} is not in the test split")
            if triple in by_triple:
                raise PredictionFileError(f"{where}: triple {raw!r} listed twice")
            heads = _entity_scores(graph, record.get("heads", []), f"{where} heads")
            tails = _entity_scores(graph, record.get("tails", []), f"{where} tails")
            by_triple[triple] = (heads, tails)

    missing = [t for t in dataset.test_triples if t not in by_triple]
    if missing:
        shown = ", ".join("(" + ", ".join(graph.decode(t)) + ")" for t in missing[:10])
        raise PredictionFileError(f"{path}: {len(missing)} test triple(s) without predictions: {shown}")

    scored = []
    for task in completion_tasks(dataset.test_triples):
        heads, tails = by_triple[task.triple]
        scores = tails if task.direction is Direction.TAIL else heads
        scored.append(ScoredCandidates(task=task, scores=scores, source=source, default=UNLISTED))
    logger.info(f"ingested predictions of {source} for {len(by_triple)} test triples from {path}")
    return scored


class PredictionModel:
    """Serves ingested ScoredCandidates by task."""

    def __init__(self, scored: list[ScoredCandidates], name: str):
        self.name = name
        self._by_task: dict[CompletionTask, ScoredCandidates] = {s.task: s for s in scored}

    @classmethod
    def from_file(cls, path: Path | str, dataset: InductiveDataset, name: str | None = None) -> "PredictionModel":
        path = Path(path)
        model_name = name or path.stem
        return cls(ingest_predictions(path, dataset, model_name), model_name)

    def score(self, task: CompletionTask) -> ScoredCandidates:
        try:
            return self._by_task[task]
        except KeyError:
            raise PredictionFileError(f"no predictions for task {task}") from None
