import logging

import numpy as np
import pytest

from core.errors import LinkEvalError, ParseError, UnknownSymbolError
from kg.graph import KnowledgeGraph, SymbolTable, Triple, load_graph, read_triples
from kg.tasks import CompletionTask, Direction, completion_tasks
from tests.test_utils import CAPITALS_TRIPLES, graph_from_names, random_graph, write_triples


def test_symbol_table_interns_in_first_appearance_order():
    table = SymbolTable(["b", "a", "b"])
    assert len(table) == 2
    assert table.id_of("b") == 0
    assert table.id_of("a") == 1
    assert table.name_of(1) == "a"
    assert "a" in table and "c" not in table
    assert table.get("c") is None
    with pytest.raises(UnknownSymbolError):
        table.id_of("c")


def test_capitals_graph_indices(capitals_graph: KnowledgeGraph):
    graph = capitals_graph
    assert len(graph) == 14
    assert len(graph.entities) == 13
    assert len(graph.relation_ids()) == 3
    capital = graph.relations.id_of("capital")
    subjects = {graph.entities.name_of(e) for e in graph.subjects(capital)}
    assert subjects == {"paris", "washington-d-c", "amsterdam"}
    located = graph.relations.id_of("locatedIn")
    assert len(graph.subjects(located)) == 8
    assert len(graph.objects(located)) == 7
    assert graph.encode("paris", "capital", "france") in graph
    assert graph.decode(graph.triples[0]) == CAPITALS_TRIPLES[0]


def test_duplicates_are_collapsed_with_a_warning(caplog):
    entities, relations = SymbolTable(), SymbolTable()
    t = Triple(entities.intern("a"), relations.intern("r"), entities.intern("b"))
    with caplog.at_level(logging.WARNING):
        graph = KnowledgeGraph.from_triples(entities, relations, [t, t, t], source="dups")
    assert len(graph) == 1
    assert graph.duplicates == 2
    assert "collapsed 2 duplicate" in caplog.text


def test_read_triples_reports_line_of_malformed_row(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("a\tr\tb\n\nc\tr\n", encoding="utf-8")
    with pytest.raises(ParseError) as exc:
        read_triples(path, SymbolTable(), SymbolTable())
    assert exc.value.line == 3
    assert "bad.txt:3" in str(exc.value)


def test_entity_names_may_contain_spaces(tmp_path):
    path = write_triples(tmp_path / "g.txt", [("washington-d-c", "locatedIn", "district of columbia")])
    graph = load_graph([path])
    assert "district of columbia" in graph.entities


def test_load_graph_requires_input():
    with pytest.raises(LinkEvalError, match="no input"):
        load_graph([])


def test_load_graph_merges_files_into_one_vocabulary(tmp_path):
    a = write_triples(tmp_path / "a.txt", CAPITALS_TRIPLES[:7])
    b = write_triples(tmp_path / "b.txt", CAPITALS_TRIPLES[7:] + CAPITALS_TRIPLES[:1])
    graph = load_graph([a, b])
    assert len(graph) == 14
    assert graph.duplicates == 1


def test_subgraph_shares_symbol_tables(capitals_graph: KnowledgeGraph):
    currency = capitals_graph.relations.id_of("currency")
    sub = capitals_graph.subgraph([t for t in capitals_graph.triples if t.relation == currency])
    assert sub.entities is capitals_graph.entities
    assert len(sub) == 3
    assert sub.relation_ids() == [currency]
    assert len(sub.entity_ids()) == 5


@pytest.mark.parametrize("seed", range(20))
def test_relation_indices_agree_with_triples(seed):
    graph = graph_from_names(random_graph(np.random.default_rng(seed), "e", 30, 4, 120))
    subjects: dict[int, set[int]] = {}
    objects: dict[int, set[int]] = {}
    for s, p, o in graph.triples:
        subjects.setdefault(p, set()).add(s)
        objects.setdefault(p, set()).add(o)
    assert graph.relation_ids() == sorted(subjects)
    for relation in graph.relation_ids():
        assert graph.subjects(relation) == subjects[relation]
        assert graph.objects(relation) == objects[relation]
    assert graph.membership == set(graph.triples)


def test_loading_the_same_files_twice_gives_the_same_ids(tmp_path):
    rng = np.random.default_rng(3)
    a = write_triples(tmp_path / "a.txt", random_graph(rng, "e", 50, 5, 200))
    b = write_triples(tmp_path / "b.txt", random_graph(rng, "f", 50, 5, 100))
    first, second = load_graph([a, b]), load_graph([a, b])
    assert first.entities == second.entities
    assert first.relations == second.relations
    assert first.triples == second.triples
    assert first.membership == second.membership


def test_completion_tasks_tail_first():
    tasks = completion_tasks([Triple(0, 5, 1)])
    assert tasks == [
        CompletionTask(Direction.TAIL, 5, 0, 1),
        CompletionTask(Direction.HEAD, 5, 1, 0),
    ]
    assert tasks[0].with_answer(7) == Triple(0, 5, 7)
    assert tasks[1].with_answer(7) == Triple(7, 5, 1)
    assert all(task.triple == Triple(0, 5, 1) for task in tasks)
