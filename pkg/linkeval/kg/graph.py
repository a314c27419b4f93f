"""
In-memory knowledge graph with interned symbols.

Triples are stored as integer ids; each graph owns (or shares with its
subgraphs) one entity table and one relation table. Indices are built once
and the graph is never mutated afterwards, so it can be handed to parallel
workers as is.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, NamedTuple, Sequence

from core.errors import LinkEvalError, ParseError, UnknownSymbolError
from log import get_logger

logger = get_logger(__name__)


class Triple(NamedTuple):
    subject: int
    relation: int
    object: int


class SymbolTable:
    """Bidirectional string <-> dense id map, ids in first-appearance order."""

    def __init__(self, names: Iterable[str] = ()):
        self._ids: dict[str, int] = {}
        self._names: list[str] = []
        for name in names:
            self.intern(name)

    def intern(self, name: str) -> int:
        idx = self._ids.get(name)
        if idx is None:
            idx = len(self._names)
            self._ids[name] = idx
            self._names.append(name)
        return idx

    def get(self, name: str) -> int | None:
        return self._ids.get(name)

    def id_of(self, name: str) -> int:
        try:
            return self._ids[name]
        except KeyError:
            raise UnknownSymbolError(f"unknown symbol: {name}") from None

    def name_of(self, idx: int) -> str:
        return self._names[idx]

    def names(self) -> list[str]:
        return list(self._names)

    def __len__(self) -> int:
        return len(self._names)

    def __contains__(self, name: object) -> bool:
        return name in self._ids

    def __iter__(self) -> Iterator[str]:
        return iter(self._names)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SymbolTable) and self._names == other._names

    def __repr__(self) -> str:
        return f"SymbolTable({len(self)} symbols)"


@dataclass(frozen=True, eq=False)
class KnowledgeGraph:
    entities: SymbolTable
    relations: SymbolTable
    triples: tuple[Triple, ...]
    by_relation_subjects: dict[int, frozenset[int]] = field(repr=False)
    by_relation_objects: dict[int, frozenset[int]] = field(repr=False)
    membership: frozenset[Triple] = field(repr=False)
    duplicates: int = 0

    @classmethod
    def from_triples(
        cls,
        entities: SymbolTable,
        relations: SymbolTable,
        triples: Iterable[Triple],
        source: str = "graph",
    ) -> "KnowledgeGraph":
        unique: dict[Triple, None] = {}
        seen = 0
        for triple in triples:
            seen += 1
            unique.setdefault(triple, None)
        duplicates = seen - len(unique)
        if duplicates:
            logger.warning(f"{source}: collapsed {duplicates} duplicate triple(s)")

        subjects: dict[int, set[int]] = {}
        objects: dict[int, set[int]] = {}
        for s, p, o in unique:
            subjects.setdefault(p, set()).add(s)
            objects.setdefault(p, set()).add(o)

        return cls(
            entities=entities,
            relations=relations,
            triples=tuple(unique),
            by_relation_subjects={p: frozenset(v) for p, v in subjects.items()},
            by_relation_objects={p: frozenset(v) for p, v in objects.items()},
            membership=frozenset(unique),
            duplicates=duplicates,
        )

    def subgraph(self, triples: Iterable[Triple], source: str = "subgraph") -> "KnowledgeGraph":
        """Graph over a subset of triples sharing this graph's symbol tables."""
        return KnowledgeGraph.from_triples(self.entities, self.relations, triples, source=source)

    def entity_ids(self) -> set[int]:
        """Entities occurring in this graph's triples."""
        found: set[int] = set()
        for s, _, o in self.triples:
            found.add(s)
            found.add(o)
        return found

    def relation_ids(self) -> list[int]:
        """Relations occurring in this graph's triples, in id order."""
        return sorted(self.by_relation_subjects)

    def subjects(self, relation: int) -> frozenset[int]:
        return self.by_relation_subjects.get(relation, frozenset())

    def objects(self, relation: int) -> frozenset[int]:
        return self.by_relation_objects.get(relation, frozenset())

    def encode(self, subject: str, relation: str, obj: str) -> Triple:
        return Triple(self.entities.id_of(subject), self.relations.id_of(relation), self.entities.id_of(obj))

    def decode(self, triple: Triple) -> tuple[str, str, str]:
        return (
            self.entities.name_of(triple.subject),
            self.relations.name_of(triple.relation),
            self.entities.name_of(triple.object),
        )

    def __contains__(self, triple: object) -> bool:
        return triple in self.membership

    def __len__(self) -> int:
        return len(self.triples)


def read_triples(path: Path, entities: SymbolTable, relations: SymbolTable) -> list[Triple]:
    """Parse one ``subject<TAB>relation<TAB>object`` file, interning symbols."""
    triples = []
    with Path(path).open(encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\r\n")
            if not line.strip():
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ParseError(path, lineno, f"expected 3 tab-separated fields, got {len(fields)}")
            s, p, o = fields
            triples.append(Triple(entities.intern(s), relations.intern(p), entities.intern(o)))
    return triples


def load_graph(triple_files: Sequence[Path | str]) -> KnowledgeGraph:
    """Load one graph from several triple files with a fresh pair of symbol tables."""
    if not triple_files:
        raise LinkEvalError("no input: at least one triple file is required")
    entities, relations = SymbolTable(), SymbolTable()
    triples: list[Triple] = []
    for path in triple_files:
        triples.extend(read_triples(Path(path), entities, relations))
    source = ", ".join(str(p) for p in triple_files)
    return KnowledgeGraph.from_triples(entities, relations, triples, source=source)
