"""
TMN JSONL files.

Line one is ``{"_meta": {...}}`` with the producing RunConfig; then one line
per test triple::

    {"triple": [s, p, o], "head_negatives": [...], "tail_negatives": [...],
     "provenance": {"head": [...], "tail": [...]}}

Entities and relations are written by name. Files published without
provenance (or without the meta line) load in strict mode.
"""
import hashlib
from pathlib import Path
from typing import Iterable

import ujson as json

from core.config import RunConfig
from core.errors import NegativesFileError
from kg.dataset import InductiveDataset
from kg.graph import KnowledgeGraph, Triple
from log import get_logger
from negatives.sampler import NegativeDraw, NegativeSet, Provenance

logger = get_logger(__name__)


def _draw_record(graph: KnowledgeGraph, draw: NegativeDraw) -> tuple[list[str], list[str] | None]:
    names = [graph.entities.name_of(e) for e in draw.negatives]
    provenance = [str(p) for p in draw.provenance] if draw.provenance is not None else None
    return names, provenance


def write_negative_sets(
    path: Path | str,
    sets: Iterable[NegativeSet],
    graph: KnowledgeGraph,
    config: RunConfig | None = None,
) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    count = 0
    with path.open("w", encoding="utf-8") as f:
        if config is not None:
            f.write(json.dumps({"_meta": config.as_meta()}, sort_keys=True) + "\n")
        for negative_set in sets:
            heads, head_provenance = _draw_record(graph, negative_set.head)
            tails, tail_provenance = _draw_record(graph, negative_set.tail)
            record: dict = {
                "triple": list(graph.decode(negative_set.triple)),
                "head_negatives": heads,
                "tail_negatives": tails,
            }
            if head_provenance is not None and tail_provenance is not None:
                record["provenance"] = {"head": head_provenance, "tail": tail_provenance}
            f.write(json.dumps(record, ensure_ascii=False) + "\n")
            count += 1
    logger.info(f"wrote {count} negative sets to {path}")
    return count


def file_checksum(path: Path | str) -> str:
    digest = hashlib.sha256()
    with Path(path).open("rb") as f:
        for block in iter(lambda: f.read(1 << 20), b""):
            digest.update(block)
    return f"sha256:{digest.hexdigest()}"


def _entity_list(graph: KnowledgeGraph, raw: object, where: str) -> tuple[int, ...]:
    if not isinstance(raw, list):
        raise NegativesFileError(f"{where}: expected a list of entity names")
    ids = []
    for name in raw:
        entity = graph.entities.get(str(name))
        if entity is None:
            raise NegativesFileError(f"{where}: unknown entity {name!r}")
        ids.append(entity)
    if len(set(ids)) != len(ids):
        raise NegativesFileError(f"{where}: duplicate negatives")
    return tuple(ids)


def _provenance_list(raw: object, expected: int, where: str) -> tuple[Provenance, ...]:
    if not isinstance(raw, list) or len(raw) != expected:
        raise NegativesFileError(f"{where}: provenance must list one entry per negative")
    try:
        return tuple(Provenance(p) for p in raw)
    except ValueError as e:
        raise NegativesFileError(f"{where}: {e}") from e


def read_negative_sets(path: Path | str, dataset: InductiveDataset, strict: bool = False) -> list[NegativeSet]:
    """Load negative sets for the dataset's test split, in test-split order.

    ``strict`` ignores provenance. Every test triple must appear exactly once
    and no other triple may appear.
    """
    path = Path(path)
    graph = dataset.test_graph.graph
    expected = set(dataset.test_triples)
    by_triple: dict[Triple, NegativeSet] = {}

    with path.open(encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            where = f"{path}:{lineno}"
            try:
                record = json.loads(line)
            except ValueError as e:
                raise NegativesFileError(f"{where}: invalid JSON: {e}") from e
            if not isinstance(record, dict):
                raise NegativesFileError(f"{where}: expected a JSON object")
            if "_meta" in record:
                continue
            raw = record.get("triple")
            if not isinstance(raw, list) or len(raw) != 3:
                raise NegativesFileError(f"{where}: 'triple' must be [subject, relation, object]")
            s, p, o = (str(x) for x in raw)
            subject, relation, obj = graph.entities.get(s), graph.relations.get(p), graph.entities.get(o)
            if subject is None or relation is None or obj is None:
                raise NegativesFileError(f"{where}: triple {raw!r} uses symbols unknown to the test graph")
            triple = Triple(subject, relation, obj)
            if triple not in expected:
                raise NegativesFileError(f"{where}: triple {raw!r} is not in the test split")
            if triple in by_triple:
                raise NegativesFileError(f"{where}: triple {raw!r} listed twice")

            heads = _entity_list(graph, record.get("head_negatives"), f"{where} head_negatives")
            tails = _entity_list(graph, record.get("tail_negatives"), f"{where} tail_negatives")
            head_provenance = tail_provenance = None
            if not strict and "provenance" in record:
                provenance = record["provenance"]
                if not isinstance(provenance, dict):
                    raise NegativesFileError(f"{where}: 'provenance' must be an object")
                head_provenance = _provenance_list(provenance.get("head"), len(heads), f"{where} provenance.head")
                tail_provenance = _provenance_list(provenance.get("tail"), len(tails), f"{where} provenance.tail")

            by_triple[triple] = NegativeSet(
                triple=triple,
                head=NegativeDraw(negatives=heads, provenance=head_provenance, requested=len(heads)),
                tail=NegativeDraw(negatives=tails, provenance=tail_provenance, requested=len(tails)),
            )

    missing = [t for t in dataset.test_triples if t not in by_triple]
    if missing:
        shown = ", ".join("(" + ", ".join(graph.decode(t)) + ")" for t in missing[:10])
        raise NegativesFileError(f"{path}: {len(missing)} test triple(s) without negatives: {shown}")
    logger.info(f"loaded negatives for {len(by_triple)} test triples from {path}")
    return [by_triple[t] for t in dataset.test_triples]
