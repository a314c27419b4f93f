"""
Negative candidates for sampled ranking protocols.

Random negatives are drawn uniformly from the test graph's entities.
Type-matched negatives (TMN) come from the entities the type rules score for
the open slot, binned by confidence (>= 0.75, [0.25, 0.75), < 0.25) and drawn
bucket by bucket, highest first; only true negatives are kept, and uniformly
random true negatives fill whatever the buckets cannot supply.
"""
from dataclasses import dataclass
from enum import StrEnum
from typing import Collection, Sequence

import numpy as np

from core.parallel import parallel_map
from core.seeding import derive_rng
from kg.dataset import InductiveDataset
from kg.graph import Triple
from kg.tasks import CompletionTask, Direction
from log import get_logger
from rules.apply import TypeScores
from rules.types import Position

logger = get_logger(__name__)

HIGH_CONFIDENCE = 0.75
LOW_CONFIDENCE = 0.25


class Provenance(StrEnum):
    BUCKET_HIGH = "bucket_high"
    BUCKET_MID = "bucket_mid"
    BUCKET_LOW = "bucket_low"
    RANDOM_FILL = "random_fill"


BUCKET_ORDER = (Provenance.BUCKET_HIGH, Provenance.BUCKET_MID, Provenance.BUCKET_LOW)


def bucket_of(confidence: float) -> Provenance:
    if confidence >= HIGH_CONFIDENCE:
        return Provenance.BUCKET_HIGH
    if confidence >= LOW_CONFIDENCE:
        return Provenance.BUCKET_MID
    return Provenance.BUCKET_LOW


@dataclass(frozen=True)
class NegativeDraw:
    negatives: tuple[int, ...]
    provenance: tuple[Provenance, ...] | None
    requested: int
    undersized: bool = False

    def __len__(self) -> int:
        return len(self.negatives)


@dataclass(frozen=True)
class NegativeSet:
    triple: Triple
    head: NegativeDraw
    tail: NegativeDraw

    @property
    def head_negatives(self) -> tuple[int, ...]:
        return self.head.negatives

    @property
    def tail_negatives(self) -> tuple[int, ...]:
        return self.tail.negatives

    def for_direction(self, direction: Direction) -> NegativeDraw:
        return self.tail if direction is Direction.TAIL else self.head

    @property
    def undersized(self) -> bool:
        return self.head.undersized or self.tail.undersized


def _as_rng(seed: int | np.random.Generator) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else derive_rng(seed)


def _sample(candidates: Sequence[int] | np.ndarray, k: int, rng: np.random.Generator) -> list[int]:
    """k distinct elements uniformly without replacement; all of them (shuffled) if fewer."""
    if k <= 0 or len(candidates) == 0:
        return []
    pool = np.asarray(candidates, dtype=np.int64)
    if len(pool) <= k:
        return rng.permutation(pool).tolist()
    return rng.choice(pool, size=k, replace=False).tolist()


def gen_random_negatives(
    task: CompletionTask,
    graph_entities: np.ndarray | Sequence[int],
    n: int,
    seed: int | np.random.Generator,
    known: Collection[Triple] | None = None,
    exclude_known: bool = False,
    known_answers: Collection[int] | None = None,
) -> NegativeDraw:
    """``n`` distinct entities other than the truth, uniformly without replacement.

    Known triples are left in by default and filtered at rank time; with
    ``exclude_known`` only entities forming unknown triples are eligible.
    ``known_answers`` (for instance ``FilterIndex.known_answers(task)``) names
    those entities directly and takes precedence over ``known``.
    """
    if n <= 0:
        return NegativeDraw(negatives=(), provenance=(), requested=max(n, 0))
    rng = _as_rng(seed)
    entities = np.asarray(graph_entities, dtype=np.int64)

    if exclude_known:
        if known_answers is None:
            known = known or frozenset()
            known_answers = [e for e in entities.tolist() if task.with_answer(e) in known]
        mask = entities != task.truth
        if known_answers:
            mask &= ~np.isin(entities, np.fromiter(known_answers, dtype=np.int64, count=len(known_answers)))
        picked = _sample(entities[mask], n, rng)
    else:
        truth_at = np.flatnonzero(entities == task.truth)
        size = len(entities) - len(truth_at)
        if size <= n:
            picked = rng.permutation(entities[entities != task.truth]).tolist()
        else:
            idx = rng.choice(size, size=n, replace=False)
            if len(truth_at):
                idx[idx >= truth_at[0]] += 1
            picked = entities[idx].tolist()

    undersized = len(picked) < n
    if undersized:
        logger.debug(f"only {len(picked)} of {n} random negatives available for {task}")
    return NegativeDraw(
        negatives=tuple(picked),
        provenance=(Provenance.RANDOM_FILL,) * len(picked),
        requested=n,
        undersized=undersized,
    )


def gen_tmn(
    task: CompletionTask,
    type_scores: TypeScores,
    graph_entities: np.ndarray | Sequence[int],
    known: Collection[Triple],
    n: int,
    seed: int | np.random.Generator,
) -> NegativeDraw:
    """Type-matched true negatives through the bucket cascade, then random fill."""
    rng = _as_rng(seed)
    buckets: dict[Provenance, list[int]] = {tier: [] for tier in BUCKET_ORDER}
    for entity, confidence in sorted(type_scores.get(task.relation, Position.of_missing_slot(task)).items()):
        buckets[bucket_of(confidence)].append(entity)

    chosen: list[int] = []
    provenance: list[Provenance] = []
    taken: set[int] = set()

    def eligible(entity: int) -> bool:
        return entity != task.truth and entity not in taken and task.with_answer(entity) not in known

    def take(candidates: list[int], tier: Provenance):
        picked = _sample(candidates, n - len(chosen), rng)
        chosen.extend(picked)
        provenance.extend([tier] * len(picked))
        taken.update(picked)

    for tier in BUCKET_ORDER:
        if len(chosen) >= n:
            break
        take([e for e in buckets[tier] if eligible(e)], tier)

    if len(chosen) < n:
        take([e for e in np.asarray(graph_entities).tolist() if eligible(e)], Provenance.RANDOM_FILL)

    undersized = len(chosen) < n
    return NegativeDraw(negatives=tuple(chosen), provenance=tuple(provenance), requested=n, undersized=undersized)


class _TmnWorker:
    def __init__(self, type_scores: TypeScores, entities: np.ndarray, known: frozenset[Triple], n: int, seed: int):
        self.type_scores = type_scores
        self.entities = entities
        self.known = known
        self.n = n
        self.seed = seed

    def __call__(self, chunk: Sequence[tuple[int, Triple]]) -> list[NegativeSet]:
        sets = []
        for index, triple in chunk:
            s, p, o = triple
            draws = {}
            for task in (CompletionTask(Direction.TAIL, p, s, o), CompletionTask(Direction.HEAD, p, o, s)):
                rng = derive_rng(self.seed, index, task.direction.code)
                draws[task.direction] = gen_tmn(task, self.type_scores, self.entities, self.known, self.n, rng)
            sets.append(NegativeSet(triple=triple, head=draws[Direction.HEAD], tail=draws[Direction.TAIL]))
        return sets


def generate_negative_sets(
    dataset: InductiveDataset,
    type_scores: TypeScores,
    n: int = 50,
    seed: int = 0,
    n_jobs: int = 1,
) -> list[NegativeSet]:
    """TMN for every test triple of the test graph, in test-split order.

    ``type_scores`` must come from rules applied to the inference split; the
    known-triple set is the whole test graph (inference, valid and test).
    """
    graph = dataset.test_graph.graph
    entities = np.arange(len(graph.entities), dtype=np.int64)
    worker = _TmnWorker(type_scores, entities, dataset.test_graph.membership, n, seed)
    sets = parallel_map(worker, list(enumerate(dataset.test_triples)), n_jobs=n_jobs)

    undersized = 0
    for negative_set in sets:
        for direction in (Direction.TAIL, Direction.HEAD):
            draw = negative_set.for_direction(direction)
            if draw.undersized:
                undersized += 1
                logger.warning(
                    f"{dataset.label}: only {len(draw)} of {n} true negatives for {direction} query of "
                    f"({', '.join(graph.decode(negative_set.triple))})"
                )
    logger.info(f"{dataset.label}: generated type-matched negatives for {len(sets)} test triples")
    if undersized:
        logger.warning(f"{dataset.label}: {undersized} undersized negative set(s)")
    return sets
