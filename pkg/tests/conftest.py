from pathlib import Path as FilePath

import pytest

from sgis.graph import parse_graph

GRAPH_DIR = FilePath(__file__).resolve().parent.parent / "graphs"


def load(name: str):
    return parse_graph((GRAPH_DIR / f"{name}.sg").read_text())


@pytest.fixture(scope="session")
def rose1t():
    return load("rose1t")


@pytest.fixture(scope="session")
def rose2t():
    return load("rose2t")


@pytest.fixture(scope="session")
def rose2f():
    return load("rose2f")


@pytest.fixture(scope="session")
def fim2():
    return load("fim2")


@pytest.fixture(scope="session")
def fim2inf():
    return load("fim2inf")


@pytest.fixture(scope="session")
def mixed():
    return load("mixed")


@pytest.fixture(scope="session")
def bench_graphs(rose2t, rose2f, fim2):
    return {"rose2t": rose2t, "rose2f": rose2f, "fim2": fim2}
