from ranking.baseline import BaselineModel, RandomModel, ScoredCandidates, ScoringModel, baseline_score
from ranking.predictions import PredictionModel, ingest_predictions

__all__ = [
    "BaselineModel",
    "PredictionModel",
    "RandomModel",
    "ScoredCandidates",
    "ScoringModel",
    "baseline_score",
    "ingest_predictions",
]
