from enum import StrEnum
from typing import Iterable, NamedTuple

from kg.graph import Triple


class Direction(StrEnum):
    HEAD = "head"
    TAIL = "tail"

    @property
    def code(self) -> int:
        """Stable integer used in seed keys: tail 0, head 1."""
        return 0 if self is Direction.TAIL else 1


class CompletionTask(NamedTuple):
    """``p(s,?)`` (tail: anchor s, truth o) or ``p(?,o)`` (head: anchor o, truth s)."""

    direction: Direction
    relation: int
    anchor: int
    truth: int

    def with_answer(self, entity: int) -> Triple:
        """The triple obtained by filling the open slot with ``entity``."""
        if self.direction is Direction.TAIL:
            return Triple(self.anchor, self.relation, entity)
        return Triple(entity, self.relation, self.anchor)

    @property
    def triple(self) -> Triple:
        return self.with_answer(self.truth)


def completion_tasks(triples: Iterable[Triple]) -> list[CompletionTask]:
    """Two tasks per triple, tail task first."""
    tasks = []
    for s, p, o in triples:
        tasks.append(CompletionTask(Direction.TAIL, p, s, o))
        tasks.append(CompletionTask(Direction.HEAD, p, o, s))
    return tasks
