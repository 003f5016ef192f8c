from __future__ import annotations

import random

import pytest

from tokenalg.graphs import Graph, all_graphs, random_graph

# Four-vertex graph whose token spectra match the worked example:
# a triangle 1-3-4 with a pendant vertex 2 hanging off 4.
PAW_EDGES = ((1, 3), (1, 4), (2, 4), (3, 4))


@pytest.fixture
def paw() -> Graph:
    return Graph(4, PAW_EDGES)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20240917)


def labeled_corpus(max_n: int):
    """Every labeled graph on 1..max_n vertices."""
    for n in range(1, max_n + 1):
        yield from all_graphs(n)


def random_corpus(ns, count: int, seed: int = 7):
    r = random.Random(seed)
    return [random_graph(r.choice(ns), r) for _ in range(count)]


# One "PASS/FAIL criterion N: ..." line per acceptance criterion, echoed at the end of the run.
ACCEPTANCE_LINES: dict[int, str] = {}


def record_criterion(number: int, passed: bool, summary: str) -> str:
    line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {summary}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for number in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[number])
