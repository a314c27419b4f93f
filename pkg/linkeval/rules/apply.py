from dataclasses import dataclass, field
from typing import Iterable, Mapping

from kg.graph import KnowledgeGraph
from log import get_logger
from rules.types import Position, RuleShape, TypeRule

logger = get_logger(__name__)

SlotKey = tuple[int, Position]


@dataclass(frozen=True, eq=False)
class TypeScores:
    """Per (relation, slot): entity -> max confidence of the rules firing for it.

    Relation and entity ids belong to the graph the rules were applied to.
    ``provenance`` names the winning rule per entity, the smallest rule shape
    among equally confident winners.
    """

    scores: dict[SlotKey, dict[int, float]] = field(default_factory=dict)
    provenance: dict[SlotKey, dict[int, RuleShape]] = field(default_factory=dict, repr=False)

    def get(self, relation: int, position: Position) -> Mapping[int, float]:
        return self.scores.get((relation, position)) or {}

    def winning_rule(self, relation: int, position: Position, entity: int) -> RuleShape | None:
        return self.provenance.get((relation, position), {}).get(entity)

    def __len__(self) -> int:
        return len(self.scores)

    def __bool__(self) -> bool:
        return bool(self.scores)


def apply_rules(rules: Iterable[TypeRule], target: KnowledgeGraph) -> TypeScores:
    """Fire every rule on ``target`` and aggregate per entity with max.

    A rule fires for each distinct entity at the body position of its body
    relation in ``target``. Relations unknown to ``target`` fire nothing.
    """
    scores: dict[SlotKey, dict[int, float]] = {}
    provenance: dict[SlotKey, dict[int, RuleShape]] = {}
    skipped = 0
    for rule in rules:
        head = target.relations.get(rule.head_relation)
        body = target.relations.get(rule.body_relation)
        if head is None or body is None:
            skipped += 1
            continue
        fired = target.subjects(body) if rule.template.body_position is Position.SUBJECT else target.objects(body)
        if not fired:
            continue
        key = (head, rule.template.head_position)
        slot_scores = scores.setdefault(key, {})
        slot_rules = provenance.setdefault(key, {})
        confidence = rule.confidence
        shape = rule.shape
        for entity in fired:
            current = slot_scores.get(entity)
            if (
                current is None
                or confidence > current
                or (confidence == current and shape.sort_key < slot_rules[entity].sort_key)
            ):
                slot_scores[entity] = confidence
                slot_rules[entity] = shape
    if skipped:
        logger.debug(f"{skipped} rule(s) mention relations unknown to the target graph")
    return TypeScores(scores=scores, provenance=provenance)
