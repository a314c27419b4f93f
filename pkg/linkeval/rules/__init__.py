from rules.apply import TypeScores, apply_rules
from rules.learner import confidence_oracle, learn_rules
from rules.types import Position, RuleShape, RuleTemplate, TypeRule

__all__ = [
    "Position",
    "RuleShape",
    "RuleTemplate",
    "TypeRule",
    "TypeScores",
    "apply_rules",
    "confidence_oracle",
    "learn_rules",
]
