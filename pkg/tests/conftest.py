from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from graphconf.graph import load_graph, parse_graph

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

CORPUS = Path(__file__).resolve().parent.parent / "corpus"


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS


def corpus_graph(name: str):
    return load_graph(CORPUS / f"{name}.graph")


@pytest.fixture
def ygraph():
    return corpus_graph("y_graph")


@pytest.fixture
def theta():
    return corpus_graph("theta")


def cycle(k: int):
    text = "".join(f"v c{i}\n" for i in range(k))
    text += "".join(f"e s{i} c{i} c{(i + 1) % k}\n" for i in range(k))
    return parse_graph(text)


def path(k: int):
    text = "".join(f"v p{i}\n" for i in range(k + 1))
    text += "".join(f"e a{i} p{i} p{i + 1}\n" for i in range(k))
    return parse_graph(text)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[k])
