import math
import random

import numpy as np
import pytest

from sgcodec.errors import BudgetExceededError
from sgcodec.graph import Graph
from sgcodec.lsfit import block_average, ls_exact, ls_heuristic

from conftest import random_graph


def k3_u_k3():
    return Graph(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)])


def test_block_average_examples(triangle):
    B, _ = block_average(triangle, [0, 0, 0], 1)
    assert B[0, 0] == pytest.approx(2 / 3)
    B, _ = block_average(triangle, [0, 1, 2], 3)
    assert np.allclose(B, [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    B, _ = block_average(k3_u_k3(), [0, 0, 0, 1, 1, 1], 2)
    assert np.allclose(B, [[2 / 3, 0], [0, 2 / 3]])


def test_block_average_is_l2_optimal(rng):
    # perturbing any fitted entry never lowers the objective
    for _ in range(10):
        g = random_graph(rng, rng.randrange(3, 9), 0.4)
        k = 2
        assignment = [rng.randrange(k) for _ in range(g.n)]
        B, _ = block_average(g, assignment, k)

        def objective(mat):
            n = g.n
            total = 0.0
            for i in range(n):
                for j in range(n):
                    a = 1.0 if g.has_edge(i, j) else 0.0
                    total += (a - mat[assignment[i], assignment[j]]) ** 2
            return math.sqrt(total) / n

        base = objective(B)
        for i in range(k):
            for j in range(k):
                for eps in (0.01, -0.01):
                    pert = B.copy()
                    pert[i, j] += eps
                    pert[j, i] = pert[i, j]
                    assert objective(pert) >= base - 1e-12


def test_ls_exact_components():
    fit = ls_exact(k3_u_k3(), 2.0)
    assert fit.objective == pytest.approx(1 / 3)
    assert fit.assignment == (0, 0, 0, 1, 1, 1)


def test_ls_exact_trivial_cases(triangle):
    single = ls_exact(triangle, 1.0)
    assert single.class_sizes == (3,)
    assert single.B[0, 0] == pytest.approx(2 / 3)
    empty = ls_exact(Graph(4, []), 2.0)
    assert empty.objective == 0.0
    ident = ls_exact(Graph(3, [(0, 1)]), 3.0)
    assert ident.objective == 0.0  # one vertex per class reproduces A


def test_ls_exact_budget():
    with pytest.raises(BudgetExceededError):
        ls_exact(Graph(20, []), 2.0)


def test_heuristic_beta1_matches_exact(triangle):
    he = ls_heuristic(triangle, 1.0, seed=3)
    ex = ls_exact(triangle, 1.0)
    assert he.assignment == ex.assignment
    assert he.objective == pytest.approx(ex.objective)


def test_heuristic_finds_components_any_seed():
    for seed in (0, 1, 2, 17, 123):
        fit = ls_heuristic(k3_u_k3(), 2.0, seed=seed)
        assert fit.objective == pytest.approx(1 / 3, abs=1e-9)


def test_heuristic_never_beats_exact(rng):
    for t in range(50):
        n = rng.randrange(4, 11)
        g = random_graph(rng, n, 0.4)
        ex = ls_exact(g, 2.0)
        he = ls_heuristic(g, 2.0, seed=t)
        assert he.objective >= ex.objective - 1e-9


def test_heuristic_deterministic(rng):
    g = random_graph(rng, 30, 0.2)
    a = ls_heuristic(g, 3.0, seed=11)
    b = ls_heuristic(g, 3.0, seed=11)
    assert a.assignment == b.assignment and a.objective == b.objective


def test_size_constraint_respected(rng):
    for _ in range(30):
        n = rng.randrange(4, 20)
        beta = rng.choice([1.5, 2.0, 2.5, 3.0])
        g = random_graph(rng, n, 0.3)
        fit = ls_heuristic(g, beta, seed=0)
        min_size = math.ceil(n / beta)
        for size in fit.class_sizes:
            assert size == 0 or size >= min_size
