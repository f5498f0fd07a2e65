from __future__ import annotations

import sys
from importlib import resources
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from graphring.plumbing import parse  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def data_path(name: str) -> Path:
    return Path(str(resources.files("graphring") / "data" / name))


def load_graph(name: str):
    return parse(data_path(name).read_text())


@pytest.fixture
def two_node():
    return load_graph("two_node.graph")


@pytest.fixture
def chain():
    return load_graph("chain.graph")


@pytest.fixture
def triangle():
    return load_graph("triangle.graph")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
