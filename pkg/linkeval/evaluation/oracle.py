"""Naive full-sort evaluation, kept as a reference for the indexed harness on small graphs."""
from core.config import TieMode
from kg.dataset import InductiveDataset
from kg.tasks import completion_tasks
from ranking.baseline import ScoringModel


def naive_ranks(model: ScoringModel, dataset: InductiveDataset, tie: TieMode = "average") -> list[float]:
    """Non-sampling filtered ranks, one per completion task, by sorting every score list."""
    known = set(dataset.test_graph.graph.triples)
    num_entities = len(dataset.test_graph.graph.entities)
    ranks = []
    for task in completion_tasks(dataset.test_triples):
        scored = model.score(task)
        listing = sorted(
            ((scored.score(e), e) for e in range(num_entities) if e == task.truth or task.with_answer(e) not in known),
            key=lambda pair: -pair[0],
        )
        truth_score = scored.score(task.truth)
        first = next(i for i, (score, _) in enumerate(listing) if score == truth_score)
        last = max(i for i, (score, _) in enumerate(listing) if score == truth_score)
        if tie == "average":
            ranks.append(1 + first + (last - first) / 2)
        else:
            ranks.append(float(1 + last))
    return ranks


def naive_metrics(ranks: list[float], ks: list[int]) -> tuple[dict[int, float], float]:
    hits = {k: sum(1 for r in ranks if r <= k) / len(ranks) for k in ks}
    return hits, sum(1 / r for r in ranks) / len(ranks)
