"""
Filtered rank of the true answer within a candidate set.

rank = 1 + #better + #tied / 2 under the average-tie convention, or
1 + #better + #tied under the pessimistic one; ranks may be fractional.
"""
from dataclasses import dataclass
from typing import Collection, Sequence

import numpy as np

from core.config import TieMode
from core.errors import ProtocolError
from evaluation.filtering import FilterIndex
from kg.graph import Triple
from kg.tasks import CompletionTask
from ranking.baseline import ScoredCandidates


@dataclass(frozen=True)
class RankingRecord:
    task: CompletionTask
    rank: float
    candidate_count: int
    protocol: str = ""

    def __post_init__(self):
        if not 1 <= self.rank <= self.candidate_count:
            raise ProtocolError(f"rank {self.rank} outside [1, {self.candidate_count}] for {self.task}")


def _filtered_out(task: CompletionTask, candidates: np.ndarray, filter_set: FilterIndex | Collection[Triple]) -> np.ndarray:
    """Mask of candidates other than the truth whose corrupted triple is known."""
    if isinstance(filter_set, FilterIndex):
        known = filter_set.known_answers(task) - {task.truth}
        if not known:
            return np.zeros(len(candidates), dtype=bool)
        return np.isin(candidates, np.fromiter(known, dtype=np.int64, count=len(known)))
    return np.fromiter(
        (e != task.truth and task.with_answer(e) in filter_set for e in candidates.tolist()),
        dtype=bool,
        count=len(candidates),
    )


def filtered_rank(
    scores: ScoredCandidates,
    candidates: np.ndarray | Sequence[int],
    filter_set: FilterIndex | Collection[Triple],
    tie: TieMode = "average",
    protocol: str = "",
    num_entities: int | None = None,
) -> RankingRecord:
    """Rank ``scores.task.truth`` among ``candidates`` after removing known answers.

    With ``num_entities`` the scores are looked up in the cached dense vector,
    which pays off when the same ScoredCandidates is ranked many times.
    """
    task = scores.task
    candidates = np.unique(np.asarray(candidates, dtype=np.int64))
    if not np.any(candidates == task.truth):
        raise ProtocolError(f"true answer {task.truth} is not among the candidates of {task}")

    kept = candidates[~_filtered_out(task, candidates, filter_set)]
    if num_entities is not None:
        values = scores.dense(num_entities)[kept]
    else:
        values = np.fromiter((scores.score(e) for e in kept.tolist()), dtype=np.float64, count=len(kept))

    is_truth = kept == task.truth
    truth_score = values[is_truth][0]
    others = values[~is_truth]
    better = int(np.count_nonzero(others > truth_score))
    tied = int(np.count_nonzero(others == truth_score))
    match tie:
        case "average":
            rank = 1 + better + tied / 2
        case "pessimistic":
            rank = float(1 + better + tied)
        case _:
            raise ProtocolError(f"Unknown tie mode: {tie}")
    return RankingRecord(task=task, rank=rank, candidate_count=len(kept), protocol=protocol)
