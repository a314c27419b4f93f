import numpy as np
import pytest

from core.errors import LinkEvalError, ParseError
from kg.dataset import GraphSplits, InductiveDataset, load_dataset
from kg.graph import KnowledgeGraph
from rules.apply import TypeScores, apply_rules
from rules.io import read_rules, write_rules
from rules.learner import confidence_oracle, learn_rules
from rules.types import Position, RuleShape, RuleTemplate, TypeRule
from tests.test_utils import graph_from_names, random_benchmark, random_graph, write_benchmark


def _by_shape(rules: list[TypeRule]) -> dict[RuleShape, TypeRule]:
    return {rule.shape: rule for rule in rules}


def test_capitals_rule_confidences(capitals_graph: KnowledgeGraph):
    rules = _by_shape(learn_rules(capitals_graph))

    currency_from_capital = rules[RuleShape("currency", "capital", RuleTemplate.SO)]
    assert (currency_from_capital.support_numerator, currency_from_capital.support_denominator) == (3, 3)
    assert currency_from_capital.confidence == 1.0

    located_from_capital = rules[RuleShape("locatedIn", "capital", RuleTemplate.SS)]
    assert (located_from_capital.support_numerator, located_from_capital.support_denominator) == (3, 3)

    # distinct-entity set formula: 3 capitals among the 8 distinct locatedIn subjects
    capital_from_located = rules[RuleShape("capital", "locatedIn", RuleTemplate.SS)]
    assert (capital_from_located.support_numerator, capital_from_located.support_denominator) == (3, 8)
    assert capital_from_located.confidence == pytest.approx(0.375)


def test_capitals_rule_set_is_complete_and_sorted(capitals_graph: KnowledgeGraph):
    rules = learn_rules(capitals_graph)
    assert len(rules) == 8
    assert [r.sort_key for r in rules] == sorted(r.sort_key for r in rules)
    assert rules[0].head_relation == "capital"
    assert all(r.head_relation != r.body_relation for r in rules)


def test_rendering(capitals_graph: KnowledgeGraph):
    rule = _by_shape(learn_rules(capitals_graph))[RuleShape("currency", "capital", RuleTemplate.SO)]
    assert str(rule).startswith("currency(X,A) <- capital(B,X)")
    assert "[3/3]" in str(rule)


def test_thresholds(capitals_graph: KnowledgeGraph):
    assert learn_rules(capitals_graph, min_confidence=1.1) == []
    confident = learn_rules(capitals_graph, min_confidence=0.5)
    assert all(r.confidence >= 0.5 for r in confident)
    assert len(confident) == 5
    # zero support keeps every rule with a non-empty body slot: 3 heads x 2 bodies x 4 templates
    assert len(learn_rules(capitals_graph, min_support=0)) == 24


def test_empty_graph_is_rejected():
    with pytest.raises(LinkEvalError):
        learn_rules(graph_from_names([]))


@pytest.mark.parametrize("seed", range(100))
def test_indexed_confidence_matches_oracle(seed):
    rng = np.random.default_rng(seed)
    num_entities = int(rng.integers(2, 51))
    num_triples = int(rng.integers(1, 201))
    graph = graph_from_names(random_graph(rng, "e", num_entities, int(rng.integers(1, 6)), num_triples))
    for rule in learn_rules(graph, min_support=0):
        assert (rule.support_numerator, rule.support_denominator) == confidence_oracle(graph, rule)


def test_rule_validation():
    with pytest.raises(ValueError):
        TypeRule("r", "r", RuleTemplate.SS, 1, 1)
    with pytest.raises(ValueError):
        TypeRule("h", "b", RuleTemplate.SS, 1, 0)
    with pytest.raises(ValueError):
        TypeRule("h", "b", RuleTemplate.SS, 2, 1)


def test_apply_takes_max_confidence(capitals_graph: KnowledgeGraph):
    rules = [
        TypeRule("capital", "locatedIn", RuleTemplate.OO, 3, 7),
        TypeRule("capital", "currency", RuleTemplate.OS, 3, 3),
    ]
    scores = apply_rules(rules, capitals_graph)
    capital = capitals_graph.relations.id_of("capital")
    objects = scores.get(capital, Position.OBJECT)
    france = capitals_graph.entities.id_of("france")
    ile_de_france = capitals_graph.entities.id_of("ile-de-france")
    assert objects[france] == 1.0
    assert objects[ile_de_france] == pytest.approx(3 / 7)
    assert scores.winning_rule(capital, Position.OBJECT, france) == rules[1].shape
    assert scores.get(capital, Position.SUBJECT) == {}


def test_equal_confidence_provenance_prefers_smaller_rule(capitals_graph: KnowledgeGraph):
    rules = [
        TypeRule("capital", "locatedIn", RuleTemplate.OO, 7, 7),
        TypeRule("capital", "currency", RuleTemplate.OS, 3, 3),
    ]
    scores = apply_rules(rules, capitals_graph)
    capital = capitals_graph.relations.id_of("capital")
    france = capitals_graph.entities.id_of("france")
    assert scores.winning_rule(capital, Position.OBJECT, france) == RuleShape(
        "capital", "currency", RuleTemplate.OS
    )


def test_rules_with_unknown_relations_fire_nothing(capitals_graph: KnowledgeGraph):
    scores = apply_rules([TypeRule("bornIn", "capital", RuleTemplate.SS, 1, 1)], capitals_graph)
    assert not scores


@pytest.mark.parametrize("seed", range(10))
def test_rules_and_scores_do_not_depend_on_triple_order(seed):
    rng = np.random.default_rng(seed)
    train = graph_from_names(random_graph(rng, "e", 30, 4, 120))
    target = graph_from_names(random_graph(rng, "f", 30, 4, 120))
    shuffled_train = train.subgraph([train.triples[i] for i in rng.permutation(len(train))])
    shuffled_target = target.subgraph([target.triples[i] for i in rng.permutation(len(target))])

    rules = learn_rules(train)
    assert learn_rules(shuffled_train) == rules
    scores = apply_rules(rules, target)
    reordered = apply_rules(rules, shuffled_target)
    assert reordered.scores == scores.scores
    assert reordered.provenance == scores.provenance


def _by_name(type_scores: TypeScores, graph: KnowledgeGraph) -> dict:
    return {
        (graph.relations.name_of(relation), position): {graph.entities.name_of(e): c for e, c in slot.items()}
        for (relation, position), slot in type_scores.scores.items()
    }


def _baseline_by_name(dataset: InductiveDataset) -> dict:
    type_scores = apply_rules(learn_rules(dataset.rule_graph), dataset.inference_graph)
    return _by_name(type_scores, dataset.test_graph.graph)


def _names(splits: GraphSplits, split: str) -> list[tuple[str, str, str]]:
    return [splits.graph.decode(t) for t in splits[split]]


@pytest.mark.parametrize("seed", range(5))
def test_held_out_splits_never_reach_the_scores(tmp_path, seed):
    full = load_dataset(random_benchmark(tmp_path, "rand_v1", seed))
    stripped = load_dataset(
        write_benchmark(
            tmp_path / "stripped",
            "rand_v1",
            {"train": _names(full.train_graph, "train"), "valid": [], "test": []},
            {"inference": _names(full.test_graph, "inference"), "valid": [], "test": []},
        )
    )
    assert len(stripped.test_triples) == 0
    assert _baseline_by_name(stripped) == _baseline_by_name(full)


def test_rule_file(tmp_path, capitals_graph: KnowledgeGraph):
    rules = learn_rules(capitals_graph)
    path = tmp_path / "rules.tsv"
    assert write_rules(path, reversed(rules)) == len(rules)
    assert read_rules(path) == rules


def test_rule_file_errors(tmp_path):
    path = tmp_path / "rules.tsv"
    path.write_text("# config: {}\ncapital\tXX\tlocatedIn\t0.375\t3\t8\n", encoding="utf-8")
    with pytest.raises(ParseError) as exc:
        read_rules(path)
    assert exc.value.line == 2
