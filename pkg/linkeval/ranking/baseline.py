"""
Scoring sources: the type-rule baseline and a uniformly random scorer.

A model maps a completion task to scores over the entities of the task's
graph. The baseline scores a candidate by the type score of the open slot,
so every task with the same relation and direction gets the same scores.
"""
from dataclasses import dataclass, field
from typing import Mapping, Protocol

import numpy as np

from core.seeding import derive_rng
from kg.tasks import CompletionTask
from rules.apply import TypeScores
from rules.types import Position


@dataclass(eq=False)
class ScoredCandidates:
    task: CompletionTask
    scores: Mapping[int, float]
    source: str
    default: float = 0.0
    _dense: np.ndarray | None = field(default=None, init=False, repr=False)

    def score(self, entity: int) -> float:
        return self.scores.get(entity, self.default)

    def dense(self, size: int) -> np.ndarray:
        """Scores of entities ``0..size-1`` as a vector, absent entities at ``default``."""
        if self._dense is None or len(self._dense) != size:
            vector = np.full(size, self.default, dtype=np.float64)
            if self.scores:
                ids = np.fromiter(self.scores.keys(), dtype=np.int64, count=len(self.scores))
                values = np.fromiter(self.scores.values(), dtype=np.float64, count=len(self.scores))
                vector[ids] = values
            self._dense = vector
        return self._dense


class ScoringModel(Protocol):
    name: str

    def score(self, task: CompletionTask) -> ScoredCandidates: ...


def baseline_score(task: CompletionTask, type_scores: TypeScores) -> ScoredCandidates:
    """Score every entity by its type score for the task's open slot (absent = 0)."""
    scores = type_scores.get(task.relation, Position.of_missing_slot(task))
    return ScoredCandidates(task=task, scores=scores, source="baseline", default=0.0)


class BaselineModel:
    name = "baseline"

    def __init__(self, type_scores: TypeScores):
        self.type_scores = type_scores

    def score(self, task: CompletionTask) -> ScoredCandidates:
        return baseline_score(task, self.type_scores)


class RandomModel:
    """I.i.d. uniform scores per (task, entity), reproducible from the seed."""

    name = "random"

    def __init__(self, num_entities: int, seed: int):
        self.num_entities = num_entities
        self.seed = seed

    def score(self, task: CompletionTask) -> ScoredCandidates:
        rng = derive_rng(self.seed, task.direction.code, task.relation, task.anchor, task.truth)
        values = rng.random(self.num_entities)
        return ScoredCandidates(task=task, scores=dict(enumerate(values.tolist())), source=self.name)
