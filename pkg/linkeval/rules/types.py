from dataclasses import dataclass
from enum import Enum, StrEnum
from typing import NamedTuple

from kg.tasks import CompletionTask, Direction


class Position(StrEnum):
    SUBJECT = "subject"
    OBJECT = "object"

    @classmethod
    def of_missing_slot(cls, task: CompletionTask) -> "Position":
        """Slot a task asks for: the object of ``p(s,?)``, the subject of ``p(?,o)``."""
        return cls.OBJECT if task.direction is Direction.TAIL else cls.SUBJECT


class RuleTemplate(Enum):
    """Position of the shared variable X in the head atom and in the body atom.

    SS: h(X,A) <- b(X,B)    SO: h(X,A) <- b(B,X)
    OS: h(A,X) <- b(X,B)    OO: h(A,X) <- b(B,X)
    """

    SS = (Position.SUBJECT, Position.SUBJECT)
    SO = (Position.SUBJECT, Position.OBJECT)
    OS = (Position.OBJECT, Position.SUBJECT)
    OO = (Position.OBJECT, Position.OBJECT)

    @property
    def head_position(self) -> Position:
        return self.value[0]

    @property
    def body_position(self) -> Position:
        return self.value[1]

    @property
    def order(self) -> int:
        return _TEMPLATE_ORDER[self]

    def render(self, head: str, body: str) -> str:
        head_atom = f"{head}(X,A)" if self.head_position is Position.SUBJECT else f"{head}(A,X)"
        body_atom = f"{body}(X,B)" if self.body_position is Position.SUBJECT else f"{body}(B,X)"
        return f"{head_atom} <- {body_atom}"


_TEMPLATE_ORDER = {template: i for i, template in enumerate(RuleTemplate)}


class RuleShape(NamedTuple):
    head_relation: str
    body_relation: str
    template: RuleTemplate

    @property
    def sort_key(self) -> tuple[str, str, int]:
        return (self.head_relation, self.body_relation, self.template.order)


@dataclass(frozen=True)
class TypeRule:
    """A two-atom rule predicting slot validity; relations are carried by name.

    Names rather than ids because a rule is learned on the train graph and
    applied to the test graph, and the two graphs have independent id spaces.
    """

    head_relation: str
    body_relation: str
    template: RuleTemplate
    support_numerator: int
    support_denominator: int

    def __post_init__(self):
        if self.head_relation == self.body_relation:
            raise ValueError(f"head and body relation must differ: {self.head_relation}")
        if self.support_denominator <= 0:
            raise ValueError(f"rule denominator must be positive: {self.shape}")
        if not 0 <= self.support_numerator <= self.support_denominator:
            raise ValueError(f"rule numerator out of range: {self.support_numerator}/{self.support_denominator}")

    @property
    def confidence(self) -> float:
        return self.support_numerator / self.support_denominator

    @property
    def shape(self) -> RuleShape:
        return RuleShape(self.head_relation, self.body_relation, self.template)

    @property
    def sort_key(self) -> tuple[str, str, int]:
        return self.shape.sort_key

    def __str__(self) -> str:
        rendered = self.template.render(self.head_relation, self.body_relation)
        return f"{rendered}  {self.confidence:.3g} [{self.support_numerator}/{self.support_denominator}]"
