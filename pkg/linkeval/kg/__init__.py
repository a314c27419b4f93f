from kg.dataset import DatasetLayout, InductiveDataset, load_dataset
from kg.graph import KnowledgeGraph, SymbolTable, Triple, load_graph
from kg.stats import StatsReport, stats
from kg.tasks import CompletionTask, Direction, completion_tasks

__all__ = [
    "CompletionTask",
    "DatasetLayout",
    "Direction",
    "InductiveDataset",
    "KnowledgeGraph",
    "StatsReport",
    "SymbolTable",
    "Triple",
    "completion_tasks",
    "load_dataset",
    "load_graph",
    "stats",
]
