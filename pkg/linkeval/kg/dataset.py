"""
Inductive benchmark loading: a train graph and an entity-disjoint test graph,
each with three splits.
"""
import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Literal

from core.errors import LinkEvalError, MissingSplitError
from kg.graph import KnowledgeGraph, SymbolTable, Triple, read_triples
from log import get_logger

logger = get_logger(__name__)

TRAIN_SPLITS = ("train", "valid", "test")
TEST_SPLITS = ("inference", "valid", "test")

_VERSION_RE = re.compile(r"^(?P<name>.+?)[_-]?(?P<version>v\d+)(?:_ind)?$", re.IGNORECASE)

_FAMILY_ALIASES = {
    "fb237": "FB15k-237",
    "fb15k237": "FB15k-237",
    "fb15k-237": "FB15k-237",
    "wn18rr": "WN18RR",
    "nell": "NELL-995",
    "nell995": "NELL-995",
    "nell-995": "NELL-995",
}


@dataclass(frozen=True)
class DatasetLayout:
    """File names of the six splits.

    With ``test_graph_suffix`` set, the test-graph files live in a sibling
    directory ``<benchmark_dir><suffix>`` instead of the benchmark directory.
    """

    train: str = "train.txt"
    valid: str = "valid.txt"
    test: str = "test.txt"
    inference: str = "train_ind.txt"
    test_valid: str = "valid_ind.txt"
    test_test: str = "test_ind.txt"
    test_graph_suffix: str | None = None

    @classmethod
    def named(cls, name: Literal["single", "grail"] | str) -> "DatasetLayout":
        match name:
            case "single":
                return cls()
            case "grail":
                return cls(
                    inference="train.txt",
                    test_valid="valid.txt",
                    test_test="test.txt",
                    test_graph_suffix="_ind",
                )
            case _:
                raise LinkEvalError(f"Unknown layout: {name}. Use 'single' or 'grail'")

    def train_graph_files(self, benchmark_dir: Path) -> dict[str, Path]:
        return {
            "train": benchmark_dir / self.train,
            "valid": benchmark_dir / self.valid,
            "test": benchmark_dir / self.test,
        }

    def test_graph_files(self, benchmark_dir: Path) -> dict[str, Path]:
        test_dir = benchmark_dir
        if self.test_graph_suffix:
            test_dir = benchmark_dir.parent / f"{benchmark_dir.name}{self.test_graph_suffix}"
        return {
            "inference": test_dir / self.inference,
            "valid": test_dir / self.test_valid,
            "test": test_dir / self.test_test,
        }


@dataclass(frozen=True, eq=False)
class GraphSplits:
    """One graph of an inductive benchmark plus the split membership of its triples."""

    graph: KnowledgeGraph
    splits: dict[str, tuple[Triple, ...]]

    def __getitem__(self, split: str) -> tuple[Triple, ...]:
        return self.splits[split]

    @property
    def membership(self) -> frozenset[Triple]:
        return self.graph.membership

    def split_graph(self, *names: str) -> KnowledgeGraph:
        triples = [t for name in names for t in self.splits[name]]
        return self.graph.subgraph(triples, source="+".join(names))


@dataclass(frozen=True, eq=False)
class InductiveDataset:
    name: str
    version: str
    path: Path
    train_graph: GraphSplits
    test_graph: GraphSplits

    @property
    def label(self) -> str:
        return f"{self.name} {self.version}".strip()

    @cached_property
    def rule_graph(self) -> KnowledgeGraph:
        """Training split of the train graph: the only triples rules are learned from."""
        return self.train_graph.split_graph("train")

    @cached_property
    def inference_graph(self) -> KnowledgeGraph:
        """Inference split of the test graph: the only triples rules are applied to."""
        return self.test_graph.split_graph("inference")

    @property
    def test_triples(self) -> tuple[Triple, ...]:
        return self.test_graph["test"]


def parse_benchmark_name(benchmark_dir: Path) -> tuple[str, str]:
    """``fb237_v1`` -> (``FB15k-237``, ``v1``); unknown names are kept verbatim."""
    match = _VERSION_RE.match(benchmark_dir.name)
    if not match:
        return benchmark_dir.name, ""
    raw = match.group("name").rstrip("_-")
    family = _FAMILY_ALIASES.get(raw.lower().replace("_", ""), raw)
    return family, match.group("version").lower()


def _load_splits(files: dict[str, Path], graph_label: str) -> GraphSplits:
    for split, path in files.items():
        if not path.is_file():
            raise MissingSplitError(f"{graph_label}.{split}", path)

    entities, relations = SymbolTable(), SymbolTable()
    splits: dict[str, tuple[Triple, ...]] = {}
    for split, path in files.items():
        triples = read_triples(path, entities, relations)
        unique = tuple(dict.fromkeys(triples))
        if len(unique) != len(triples):
            logger.warning(f"{graph_label}.{split}: collapsed {len(triples) - len(unique)} duplicate triple(s)")
        splits[split] = unique

    graph = KnowledgeGraph.from_triples(
        entities, relations, (t for part in splits.values() for t in part), source=graph_label
    )
    return GraphSplits(graph=graph, splits=splits)


def check_disjointness(dataset: InductiveDataset) -> list[str]:
    """Return (and log) every violated structural invariant; never raises."""
    problems = []
    for label, graph_splits in (("train_graph", dataset.train_graph), ("test_graph", dataset.test_graph)):
        names = list(graph_splits.splits)
        for i, a in enumerate(names):
            for b in names[i + 1 :]:
                overlap = set(graph_splits[a]) & set(graph_splits[b])
                if overlap:
                    problems.append(f"{label}: {len(overlap)} triple(s) shared by {a} and {b}")

    train_entities = set(dataset.train_graph.graph.entities)
    test_entities = set(dataset.test_graph.graph.entities)
    shared = train_entities & test_entities
    if shared:
        problems.append(f"{len(shared)} entities occur in both train and test graph")

    unseen = set(dataset.test_graph.graph.relations) - set(dataset.train_graph.graph.relations)
    if unseen:
        problems.append(f"{len(unseen)} test-graph relation(s) absent from the train graph: {sorted(unseen)[:5]}")

    for problem in problems:
        logger.warning(f"{dataset.label}: {problem}")
    return problems


def load_dataset(benchmark_dir: Path | str, layout: DatasetLayout | None = None) -> InductiveDataset:
    benchmark_dir = Path(benchmark_dir)
    layout = layout or DatasetLayout()
    if not benchmark_dir.is_dir():
        raise LinkEvalError(f"benchmark directory not found: {benchmark_dir}")

    train = _load_splits(layout.train_graph_files(benchmark_dir), "train_graph")
    test = _load_splits(layout.test_graph_files(benchmark_dir), "test_graph")
    name, version = parse_benchmark_name(benchmark_dir)
    dataset = InductiveDataset(name=name, version=version, path=benchmark_dir, train_graph=train, test_graph=test)
    check_disjointness(dataset)
    logger.info(
        f"loaded {dataset.label}: train graph {len(train.graph.entities)} entities / {len(train.graph)} triples, "
        f"test graph {len(test.graph.entities)} entities / {len(test.graph)} triples"
    )
    return dataset
