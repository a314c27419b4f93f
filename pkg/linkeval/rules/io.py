"""Rule file: ``head<TAB>template<TAB>body<TAB>confidence<TAB>num<TAB>den`` per line."""
from pathlib import Path
from typing import Iterable

from core.config import RunConfig
from core.errors import ParseError
from rules.types import RuleTemplate, TypeRule


def format_rule(rule: TypeRule) -> str:
    return "\t".join(
        [
            rule.head_relation,
            rule.template.name,
            rule.body_relation,
            repr(rule.confidence),
            str(rule.support_numerator),
            str(rule.support_denominator),
        ]
    )


def write_rules(path: Path, rules: Iterable[TypeRule], config: RunConfig | None = None) -> int:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    ordered = sorted(rules, key=lambda r: r.sort_key)
    with path.open("w", encoding="utf-8") as f:
        if config is not None:
            for line in config.header_lines():
                f.write(line + "\n")
        for rule in ordered:
            f.write(format_rule(rule) + "\n")
    return len(ordered)


def read_rules(path: Path) -> list[TypeRule]:
    rules = []
    with Path(path).open(encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.rstrip("\r\n")
            if not line or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 6:
                raise ParseError(path, lineno, f"expected 6 tab-separated fields, got {len(fields)}")
            head, template, body, _confidence, numerator, denominator = fields
            try:
                rules.append(TypeRule(head, body, RuleTemplate[template], int(numerator), int(denominator)))
            except (KeyError, ValueError) as e:
                raise ParseError(path, lineno, f"invalid rule: {e}") from e
    return rules
