"""
Type-rule learning.

For every ordered pair of distinct relations (h, b) and every template, the
rule's confidence is |X_b ∩ X_h| / |X_b| where X_b holds the distinct
entities at the body position of b and X_h the distinct entities at the head
position of h, both taken from the training triples.
"""
from typing import Sequence

from core.errors import LinkEvalError
from core.parallel import parallel_map
from kg.graph import KnowledgeGraph
from log import get_logger
from rules.types import Position, RuleShape, RuleTemplate, TypeRule

logger = get_logger(__name__)


def _slot(graph: KnowledgeGraph, relation: int, position: Position) -> frozenset[int]:
    return graph.subjects(relation) if position is Position.SUBJECT else graph.objects(relation)


class _HeadRelationLearner:
    """Picklable worker: learns all rules for a chunk of head relations."""

    def __init__(self, graph: KnowledgeGraph, min_support: int, min_confidence: float):
        self.graph = graph
        self.min_support = min_support
        self.min_confidence = min_confidence

    def __call__(self, heads: Sequence[int]) -> list[list[TypeRule]]:
        return [self._learn_for(h) for h in heads]

    def _learn_for(self, h: int) -> list[TypeRule]:
        graph = self.graph
        names = graph.relations
        rules = []
        for b in graph.relation_ids():
            if b == h:
                continue
            for template in RuleTemplate:
                x_b = _slot(graph, b, template.body_position)
                if not x_b:
                    continue
                x_h = _slot(graph, h, template.head_position)
                numerator = len(x_b & x_h)
                if numerator < self.min_support:
                    continue
                if numerator / len(x_b) < self.min_confidence:
                    continue
                rules.append(TypeRule(names.name_of(h), names.name_of(b), template, numerator, len(x_b)))
        return rules


def learn_rules(
    train: KnowledgeGraph,
    min_support: int = 1,
    min_confidence: float = 0.0,
    n_jobs: int = 1,
) -> list[TypeRule]:
    """All rules passing both thresholds, ordered by (head, body, template)."""
    if len(train) == 0:
        raise LinkEvalError("cannot learn rules from an empty graph")
    heads = train.relation_ids()
    per_head = parallel_map(_HeadRelationLearner(train, min_support, min_confidence), heads, n_jobs=n_jobs)
    rules = sorted((rule for chunk in per_head for rule in chunk), key=lambda r: r.sort_key)
    logger.info(
        f"learned {len(rules)} type rules over {len(heads)} relations "
        f"(min_support={min_support}, min_confidence={min_confidence})"
    )
    return rules


def confidence_oracle(train: KnowledgeGraph, rule: RuleShape | TypeRule) -> tuple[int, int]:
    """(numerator, denominator) by brute-force scans of the triple list, no indices."""
    x_b: set[int] = set()
    x_h: set[int] = set()
    for triple in train.triples:
        relation = train.relations.name_of(triple.relation)
        if relation == rule.body_relation:
            x_b.add(triple.subject if rule.template.body_position is Position.SUBJECT else triple.object)
        if relation == rule.head_relation:
            x_h.add(triple.subject if rule.template.head_position is Position.SUBJECT else triple.object)
    return len(x_b & x_h), len(x_b)
