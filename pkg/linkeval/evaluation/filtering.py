from typing import Iterable

from kg.graph import Triple
from kg.tasks import CompletionTask, Direction


class FilterIndex:
    """Known triples indexed by the open slot of a completion task."""

    def __init__(self, triples: Iterable[Triple]):
        self._tails: dict[tuple[int, int], set[int]] = {}
        self._heads: dict[tuple[int, int], set[int]] = {}
        self._size = 0
        for s, p, o in set(triples):
            self._tails.setdefault((s, p), set()).add(o)
            self._heads.setdefault((p, o), set()).add(s)
            self._size += 1

    def known_answers(self, task: CompletionTask) -> frozenset[int]:
        """Entities e with ``task.with_answer(e)`` known, the truth included."""
        if task.direction is Direction.TAIL:
            found = self._tails.get((task.anchor, task.relation))
        else:
            found = self._heads.get((task.relation, task.anchor))
        return frozenset(found) if found else frozenset()

    def __contains__(self, triple: object) -> bool:
        if not isinstance(triple, tuple) or len(triple) != 3:
            return False
        s, p, o = triple
        return o in self._tails.get((s, p), ())

    def __len__(self) -> int:
        return self._size
