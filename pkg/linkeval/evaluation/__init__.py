from evaluation.compare import compare
from evaluation.filtering import FilterIndex
from evaluation.harness import evaluate
from evaluation.metrics import MetricReport, Metrics, average_reports, hits_at_k, mrr, reports_frame
from evaluation.protocols import NonSampling, Protocol, RandomSampling, TypeMatched, make_protocol
from evaluation.ranking import RankingRecord, filtered_rank

__all__ = [
    "FilterIndex",
    "MetricReport",
    "Metrics",
    "NonSampling",
    "Protocol",
    "RandomSampling",
    "RankingRecord",
    "TypeMatched",
    "average_reports",
    "compare",
    "evaluate",
    "filtered_rank",
    "hits_at_k",
    "make_protocol",
    "mrr",
    "reports_frame",
]
