import random
from fractions import Fraction

import pytest

from sgcodec.errors import SgcError
from sgcodec.graph import Graph
from sgcodec.rooted import (
    LocalDist,
    dist_degree,
    empirical_local_dist,
    lp_distance,
    lp_distance_exact,
    neighborhood_class,
    point_mass,
    rooted_ball,
    rooted_distance,
)

from conftest import random_graph


def cycle(n):
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def permute(g: Graph, perm):
    return Graph(g.n, [(perm[u], perm[v]) for u, v in g.edges()])


def test_depth0_unique_class(triangle, star6):
    c1 = neighborhood_class(triangle, 0, 0)
    c2 = neighborhood_class(star6, 3, 0)
    assert c1 == c2


def test_cycle_depth2_is_centered_path():
    c10 = cycle(10)
    p5 = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    for root in range(10):
        assert neighborhood_class(c10, root, 2) == neighborhood_class(p5, 2, 2)


def test_triangle_vs_square_depth1(triangle):
    c4 = cycle(4)
    assert neighborhood_class(triangle, 0, 1) != neighborhood_class(c4, 0, 1)


def test_root_out_of_range(triangle):
    with pytest.raises(SgcError):
        neighborhood_class(triangle, 7, 1)


def test_canon_permutation_invariance(rng):
    for _ in range(200):
        n = rng.randrange(1, 12)
        g = random_graph(rng, n, rng.random() * 0.7)
        perm = list(range(n))
        rng.shuffle(perm)
        pg = permute(g, perm)
        root = rng.randrange(n)
        h = rng.randrange(0, 4)
        assert neighborhood_class(g, root, h) == neighborhood_class(
            pg, perm[root], h
        )


def test_rooted_distance_cases(triangle):
    rb_tri = rooted_ball(triangle, 0, None)
    assert rooted_distance(rb_tri, rb_tri) == 0
    rb_c4 = rooted_ball(cycle(4), 0, None)
    assert rooted_distance(rb_tri, rb_c4) == 1
    rb_c5 = rooted_ball(cycle(5), 0, None)
    rb_c6 = rooted_ball(cycle(6), 0, None)
    assert rooted_distance(rb_c5, rb_c6) == Fraction(1, 2)


def test_rooted_distance_metric_axioms(rng):
    balls = []
    for _ in range(25):
        g = random_graph(rng, rng.randrange(1, 8), rng.random())
        balls.append(rooted_ball(g, rng.randrange(g.n), None))
    for _ in range(200):
        a, b, c = (balls[rng.randrange(len(balls))] for _ in range(3))
        dab, dba = rooted_distance(a, b), rooted_distance(b, a)
        assert dab == dba
        assert rooted_distance(a, c) <= dab + rooted_distance(b, c)


def test_empirical_dist_figure(figure_graph):
    u2 = empirical_local_dist(figure_graph, 2)
    assert sorted(u2.weights) == [
        Fraction(1, 4),
        Fraction(1, 4),
        Fraction(1, 2),
    ]


def test_empirical_dist_point_masses(triangle):
    assert len(empirical_local_dist(cycle(10), 2)) == 1
    assert len(empirical_local_dist(triangle, 1)) == 1
    with pytest.raises(SgcError):
        empirical_local_dist(Graph(0, []), 1)


def test_empirical_isomorphism_invariance(rng):
    for _ in range(40):
        n = rng.randrange(1, 9)
        g = random_graph(rng, n, rng.random())
        perm = list(range(n))
        rng.shuffle(perm)
        assert empirical_local_dist(g, 2) == empirical_local_dist(
            permute(g, perm), 2
        )


def test_dist_degree(triangle, star6):
    assert dist_degree(empirical_local_dist(triangle, 1)) == 2
    assert dist_degree(empirical_local_dist(star6, 1)) == Fraction(5, 3)
    assert dist_degree(empirical_local_dist(Graph(4, []), 1)) == 0
    with pytest.raises(SgcError):
        dist_degree(empirical_local_dist(triangle, 0))


def test_dist_degree_handshake(rng):
    for _ in range(100):
        n = rng.randrange(1, 14)
        g = random_graph(rng, n, rng.random() * 0.6)
        assert dist_degree(empirical_local_dist(g, 1)) == Fraction(2 * g.m, g.n)


def test_lp_distance_cases(triangle):
    d_tri = point_mass(rooted_ball(triangle, 0, None), -1)
    d_c4 = point_mass(rooted_ball(cycle(4), 0, None), -1)
    assert lp_distance_exact(d_tri, d_tri) == 0
    assert lp_distance_exact(d_tri, d_c4) == rooted_distance(
        rooted_ball(triangle, 0, None), rooted_ball(cycle(4), 0, None)
    )
    mix = LocalDist(
        -1,
        list(d_tri.classes) + list(d_c4.classes),
        [Fraction(7, 10), Fraction(3, 10)],
        list(d_tri.reps) + list(d_c4.reps),
    )
    assert lp_distance_exact(d_tri, mix) == Fraction(3, 10)


def test_lp_point_masses_equal_rooted_distance(rng):
    balls = [
        rooted_ball(random_graph(rng, rng.randrange(1, 8), rng.random()), 0, None)
        for _ in range(30)
    ]
    for _ in range(50):
        a, b = rng.sample(balls, 2)
        assert lp_distance_exact(point_mass(a, -1), point_mass(b, -1)) == (
            rooted_distance(a, b)
        )


def test_lp_symmetry_and_bound(rng):
    dists = [
        empirical_local_dist(random_graph(rng, rng.randrange(1, 7), rng.random()), None)
        for _ in range(12)
    ]
    for _ in range(40):
        a, b = rng.sample(dists, 2)
        dab = lp_distance_exact(a, b)
        assert dab == lp_distance_exact(b, a)
        assert 0 <= dab <= 1
        assert lp_distance(a, a) == 0.0
