import pytest

from kg.dataset import InductiveDataset, load_dataset
from kg.graph import KnowledgeGraph
from tests.test_utils import CAPITALS_TRIPLES, graph_from_names, TOY_TEST_GRAPH, TOY_TRAIN_GRAPH, write_benchmark

try:
    from dotenv import load_dotenv
except ImportError:
    load_dotenv = None


@pytest.fixture(scope="session", autouse=True)
def load_env_for_tests():
    """Load .env file for tests if python-dotenv is available."""
    if load_dotenv:
        load_dotenv()


@pytest.fixture
def capitals_graph() -> KnowledgeGraph:
    return graph_from_names(CAPITALS_TRIPLES)


@pytest.fixture
def toy_benchmark_dir(tmp_path):
    return write_benchmark(tmp_path, "toy_v1", TOY_TRAIN_GRAPH, TOY_TEST_GRAPH)


@pytest.fixture
def toy_dataset(toy_benchmark_dir) -> InductiveDataset:
    return load_dataset(toy_benchmark_dir)
