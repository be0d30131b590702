import math
import random

import pytest

from sgcodec.errors import SgcError
from sgcodec.graph import (
    Graph,
    degree_histogram,
    density,
    matrix_lp_norm,
    read_edgelist,
    split,
    write_edgelist,
)

from conftest import random_graph


def test_density_examples(triangle):
    assert density(triangle) == pytest.approx(2 / 3)
    assert density(Graph(5, [])) == 0.0
    k4 = Graph(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])
    assert density(k4) == 0.75
    assert density(Graph(0, [])) == 0.0


def test_lp_norm_examples(triangle):
    assert matrix_lp_norm(triangle, 1) == pytest.approx(2 / 3)
    assert matrix_lp_norm(triangle, 2) == pytest.approx(math.sqrt(2 / 3))
    assert matrix_lp_norm(Graph(4, []), 3) == 0.0
    with pytest.raises(SgcError):
        matrix_lp_norm(triangle, 0.5)


def test_l1_norm_equals_density(rng):
    for _ in range(100):
        g = random_graph(rng, rng.randrange(1, 20), rng.random())
        assert matrix_lp_norm(g, 1) == pytest.approx(density(g), abs=1e-14)


def test_graph_invariants_rejected():
    with pytest.raises(SgcError):
        Graph(3, [(0, 0)])
    with pytest.raises(SgcError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(SgcError):
        Graph(2, [(0, 5)])


def test_split_star():
    star = Graph(6, [(0, i) for i in range(1, 6)])
    sr = split(star, 3.0)
    assert sr.light.m == 0 and sr.heavy.m == 5
    assert len(sr.heavy_set) == 6


def test_split_path_all_light():
    path = Graph(4, [(0, 1), (1, 2), (2, 3)])
    sr = split(path, 2.0)
    assert sr.light == path
    assert sr.heavy.m == 0 and sr.heavy_set == ()


def test_split_figure_graph(figure_graph):
    sr = split(figure_graph, 2.0)
    assert sr.light.m == 4 and sr.heavy.m == 5
    assert set(sr.light.edges()) == {(0, 1), (0, 2), (5, 7), (6, 7)}
    assert sr.heavy_set == (1, 2, 3, 4, 5, 6)
    assert sr.eta == pytest.approx(0.75)


def test_split_partition_and_monotonicity(rng):
    for _ in range(60):
        g = random_graph(rng, rng.randrange(1, 25), rng.random() * 0.6)
        d1, d2 = sorted([rng.uniform(0, 5), rng.uniform(0, 5)])
        s1, s2 = split(g, d1), split(g, d2)
        assert s1.light.m + s1.heavy.m == g.m
        assert set(s1.light.edges()) | set(s1.heavy.edges()) == set(g.edges())
        assert set(s1.light.edges()) <= set(s2.light.edges())
        heavy_set = set(s1.heavy_set)
        for u, v in s1.heavy.edges():
            assert u in heavy_set and v in heavy_set


def test_degree_histogram(triangle):
    assert degree_histogram(triangle) == {2: 3}
    star = Graph(6, [(0, i) for i in range(1, 6)])
    assert degree_histogram(star) == {1: 5, 5: 1}
    assert degree_histogram(Graph(3, [])) == {0: 3}
    g = random_graph(random.Random(1), 17, 0.3)
    hist = degree_histogram(g)
    assert sum(hist.values()) == g.n
    assert sum(d * c for d, c in hist.items()) == 2 * g.m


def test_edgelist_roundtrip(tmp_path, figure_graph):
    p = tmp_path / "g.txt"
    write_edgelist(figure_graph, p)
    first = p.read_text()
    assert first.splitlines()[0] == "8 9"
    g2 = read_edgelist(p)
    assert g2 == figure_graph
    write_edgelist(g2, p)
    assert p.read_text() == first
