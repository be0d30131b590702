import random

import pytest

from sgcodec.graph import Graph


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < p
    ]
    return Graph(n, edges)


def all_graphs(n: int):
    cells = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for mask in range(1 << len(cells)):
        yield Graph(n, [cells[k] for k in range(len(cells)) if mask >> k & 1])


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)


@pytest.fixture
def figure_graph():
    # two 4-cycles joined by a path through two degree-3 vertices
    return Graph(
        8, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (4, 6), (5, 7), (6, 7)]
    )


@pytest.fixture
def triangle():
    return Graph(3, [(0, 1), (0, 2), (1, 2)])


@pytest.fixture
def star6():
    return Graph(6, [(0, i) for i in range(1, 6)])
