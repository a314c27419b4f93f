"""
Protocol-aware evaluation of a scoring model on the test split of the test graph.

Completion tasks are enumerated in test-split order, tail task before head
task. Tasks are scored and ranked in ordered chunks (possibly in parallel);
every sampled candidate set is drawn from a stream keyed by
(seed, triple index, direction, run), so reports do not depend on ``n_jobs``.
"""
from typing import Sequence

import numpy as np

from core.config import TieMode
from core.errors import ProtocolError
from core.parallel import parallel_map
from core.seeding import derive_rng
from evaluation.filtering import FilterIndex
from evaluation.metrics import MetricReport, Metrics, mean_metrics, summarize
from evaluation.protocols import NonSampling, Protocol, RandomSampling, TypeMatched
from evaluation.ranking import RankingRecord, filtered_rank
from kg.dataset import InductiveDataset
from kg.tasks import CompletionTask, Direction, completion_tasks
from log import get_logger
from negatives.io import file_checksum, read_negative_sets
from negatives.sampler import NegativeSet, gen_random_negatives
from ranking.baseline import ScoringModel

logger = get_logger(__name__)

IndexedTask = tuple[int, CompletionTask]


class _NonSamplingWorker:
    def __init__(self, model: ScoringModel, num_entities: int, filter_index: FilterIndex, tie: TieMode):
        self.model = model
        self.num_entities = num_entities
        self.filter_index = filter_index
        self.tie = tie

    def __call__(self, chunk: Sequence[IndexedTask]) -> list[RankingRecord]:
        candidates = np.arange(self.num_entities, dtype=np.int64)
        return [
            filtered_rank(
                self.model.score(task),
                candidates,
                self.filter_index,
                tie=self.tie,
                protocol=NonSampling.name,
                num_entities=self.num_entities,
            )
            for _, task in chunk
        ]


class _RandomSamplingWorker:
    """Ranks per task for every run: one list of ``runs`` records per task."""

    def __init__(
        self,
        model: ScoringModel,
        num_entities: int,
        filter_index: FilterIndex,
        protocol: RandomSampling,
        seed: int,
        tie: TieMode,
    ):
        self.model = model
        self.num_entities = num_entities
        self.filter_index = filter_index
        self.protocol = protocol
        self.seed = seed
        self.tie = tie

    def __call__(self, chunk: Sequence[IndexedTask]) -> list[list[RankingRecord]]:
        entities = np.arange(self.num_entities, dtype=np.int64)
        per_task = []
        for triple_index, task in chunk:
            scored = self.model.score(task)
            known_answers = self.filter_index.known_answers(task) if self.protocol.exclude_known else None
            records = []
            for run in range(self.protocol.runs):
                rng = derive_rng(self.seed, triple_index, task.direction.code, run)
                draw = gen_random_negatives(
                    task,
                    entities,
                    self.protocol.negatives,
                    rng,
                    exclude_known=self.protocol.exclude_known,
                    known_answers=known_answers,
                )
                candidates = np.array((task.truth, *draw.negatives), dtype=np.int64)
                records.append(
                    filtered_rank(
                        scored,
                        candidates,
                        self.filter_index,
                        tie=self.tie,
                        protocol=RandomSampling.name,
                        num_entities=self.num_entities,
                    )
                )
            per_task.append(records)
        return per_task


class _TypeMatchedWorker:
    def __init__(self, model: ScoringModel, sets: list[NegativeSet], filter_index: FilterIndex, tie: TieMode):
        self.model = model
        self.sets = sets
        self.filter_index = filter_index
        self.tie = tie

    def __call__(self, chunk: Sequence[IndexedTask]) -> list[RankingRecord]:
        records = []
        for triple_index, task in chunk:
            negatives = self.sets[triple_index].for_direction(task.direction).negatives
            candidates = np.array((task.truth, *negatives), dtype=np.int64)
            records.append(
                filtered_rank(self.model.score(task), candidates, self.filter_index, tie=self.tie, protocol=TypeMatched.name)
            )
        return records


def _summaries(records: Sequence[RankingRecord], ks: Sequence[int]) -> tuple[Metrics, dict[str, Metrics]]:
    per_direction = {
        str(direction): summarize([r for r in records if r.task.direction is direction], ks)
        for direction in (Direction.HEAD, Direction.TAIL)
    }
    return summarize(records, ks), per_direction


def evaluate(
    model: ScoringModel,
    dataset: InductiveDataset,
    protocol: Protocol,
    ks: Sequence[int] = (1, 3, 10),
    seed: int | None = None,
    tie: TieMode = "average",
    n_jobs: int = 1,
) -> MetricReport:
    """Evaluate ``model`` on every completion task of the test split.

    The filter set is the whole test graph (inference, valid and test).
    The random protocol computes metrics per run and averages them; it
    requires ``seed``.
    """
    if not ks or any(k < 1 for k in ks):
        raise ProtocolError(f"ks must be positive integers, got {list(ks)}")
    graph = dataset.test_graph.graph
    num_entities = len(graph.entities)
    tasks: list[IndexedTask] = [(i // 2, task) for i, task in enumerate(completion_tasks(dataset.test_triples))]
    if not tasks:
        raise ProtocolError(f"{dataset.label}: the test split is empty")
    filter_index = FilterIndex(dataset.test_graph.membership)
    checksums: dict[str, str] = {}
    run_metrics: list[Metrics] = []
    runs = 1

    match protocol:
        case NonSampling():
            worker = _NonSamplingWorker(model, num_entities, filter_index, tie)
            records = parallel_map(worker, tasks, n_jobs=n_jobs)
            headline, per_direction = _summaries(records, ks)

        case RandomSampling(runs=protocol_runs):
            if seed is None:
                raise ProtocolError("the random protocol requires a seed")
            worker = _RandomSamplingWorker(model, num_entities, filter_index, protocol, seed, tie)
            per_task = parallel_map(worker, tasks, n_jobs=n_jobs)
            per_run_direction: dict[str, list[Metrics]] = {}
            for run in range(protocol_runs):
                run_headline, run_directions = _summaries([records[run] for records in per_task], ks)
                run_metrics.append(run_headline)
                for direction, metrics in run_directions.items():
                    per_run_direction.setdefault(direction, []).append(metrics)
            headline = mean_metrics(run_metrics)
            per_direction = {d: mean_metrics(m) for d, m in per_run_direction.items()}
            runs = protocol_runs

        case TypeMatched(negatives_file=negatives_file, strict=strict):
            sets = read_negative_sets(negatives_file, dataset, strict=strict)
            checksums["tmn_file"] = file_checksum(negatives_file)
            worker = _TypeMatchedWorker(model, sets, filter_index, tie)
            records = parallel_map(worker, tasks, n_jobs=n_jobs)
            headline, per_direction = _summaries(records, ks)

        case _:
            raise ProtocolError(f"Unknown protocol: {protocol!r}")

    report = MetricReport(
        dataset=dataset.name,
        version=dataset.version,
        model=model.name,
        protocol=protocol.name,
        hits_at=headline.hits_at,
        mrr=headline.mrr,
        task_count=headline.task_count,
        per_direction=per_direction,
        runs=runs,
        run_metrics=run_metrics,
        tie=tie,
        checksums=checksums,
    )
    top_k = max(ks)
    logger.info(
        f"{dataset.label} {model.name} {protocol.name}: hits@{top_k}={report.hits_at[top_k]:.3f} "
        f"mrr={report.mrr:.3f} over {report.task_count} tasks"
    )
    return report
