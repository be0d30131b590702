import math

import pytest

from sgcodec import lwc
from sgcodec.errors import BudgetExceededError, MalformedStreamError
from sgcodec.graph import Graph
from sgcodec.rooted import neighborhood_class

from conftest import all_graphs, random_graph


def test_params_examples():
    h, d = lwc.lwc_params(16)
    assert h == 1 and d == pytest.approx(1.0197, abs=1e-4)
    for n in (1, 2, 5, 15):
        h, d = lwc.lwc_params(n)
        assert (h, d) == (1, 0.0)
    # conceptual n = e^(e^4): depth hits 2
    big = int(math.exp(math.exp(4.0))) + 10**20
    h, _ = lwc.lwc_params(big)
    assert h == 2


def test_empty_graph_encoding():
    g = Graph(4, [])
    enc = lwc.lwc_encode(g)
    assert enc.mode_used == "exact"
    assert dict(enc.sections)["lwc/index"] == 0
    assert lwc.lwc_decode(enc.data) == g


def test_one_edge_n3_table_and_index_width():
    g = Graph(3, [(0, 1)])
    enc = lwc.lwc_encode(g, mode="exact", params=(1, 1.5))
    assert sorted(c for (_, _, c) in enc.table.entries) == [1, 2]
    assert lwc.enumerate_typical(3, enc.table).count == 3
    assert dict(enc.sections)["lwc/index"] == 2
    assert lwc.lwc_decode(enc.data, params=(1, 1.5)) == g


def test_star_goes_through_residual_sections(star6):
    enc = lwc.lwc_encode(star6)  # degree bound is 0 at n=6
    assert enc.m_tilde == 0
    assert enc.y_set == tuple(range(6))
    assert lwc.lwc_decode(enc.data) == star6


def test_degree_bounded_input_empty_residual(rng):
    # all degrees <= D: the residual sections carry zero content bits
    for i in range(20):
        n = rng.randrange(2, 12)
        g = random_graph(rng, n, 0.3)
        dmax = max(g.degree(v) for v in range(n))
        mode = "auto" if i < 3 else "surrogate"
        enc = lwc.lwc_encode(g, mode=mode, params=(1, float(dmax)))
        sections = dict(enc.sections)
        assert sections["lwc/y_rank"] == 0
        assert sections["lwc/z_len"] == 0
        assert sections["lwc/z_rank"] == 0
        assert lwc.lwc_decode(enc.data, params=(1, float(dmax))) == g


def test_enumerate_examples():
    empty_table = lwc.build_type_table(Graph(5, []), 1, 2.0)
    assert lwc.enumerate_typical(5, empty_table).count == 1
    matching = lwc.build_type_table(Graph(4, [(0, 1), (2, 3)]), 1, 1.0)
    assert lwc.enumerate_typical(4, matching).count == 3


def brute_force_count(n, table):
    target = {cls.canon: c for (cls, _, c) in table.entries}
    dfl = int(table.degree_bound)
    count = 0
    for g in all_graphs(n):
        if any(g.degree(v) > dfl for v in range(n)):
            continue
        prof = {}
        for v in range(n):
            c = neighborhood_class(g, v, table.depth)
            prof[c.canon] = prof.get(c.canon, 0) + 1
        if prof == target:
            count += 1
    return count


def test_enumerate_matches_brute_force(rng):
    seen = 0
    while seen < 25:
        n = rng.choice([3, 4, 5])
        g = random_graph(rng, n, 0.4)
        for dbound in (2.0, 4.0):
            if any(g.degree(v) > dbound for v in range(n)):
                continue
            table = lwc.build_type_table(g, 1, dbound)
            ens = lwc.enumerate_typical(n, table)
            assert ens.count == brute_force_count(n, table)
            for r in range(ens.count):
                assert ens.rank_of(ens.graph_of_rank(r)) == r
            seen += 1


def test_enumeration_budget():
    g = random_graph(__import__("random").Random(4), 24, 0.15)
    dmax = max(g.degree(v) for v in range(g.n))
    table = lwc.build_type_table(g, 1, float(max(dmax, 3)))
    with pytest.raises(BudgetExceededError):
        lwc.enumerate_typical(g.n, table, node_budget=50)


def test_lemma210_examples():
    assert lwc.lemma210_budget(3, 1) == pytest.approx(math.log(3))
    assert lwc.lemma210_budget(3, 0) == 0.0
    assert lwc.lemma210_budget(5, 4) == pytest.approx(math.log(210))


def test_exhaustive_roundtrip_n4_both_modes():
    for g in all_graphs(4):
        for mode in ("auto", "surrogate"):
            enc = lwc.lwc_encode(g, mode=mode)
            assert lwc.lwc_decode(enc.data) == g


def test_roundtrip_random_wide(rng):
    for _ in range(120):
        n = rng.randrange(1, 40)
        g = random_graph(rng, n, rng.choice([0.05, 0.2, 0.5]))
        enc = lwc.lwc_encode(g)
        assert lwc.lwc_decode(enc.data) == g


def test_truncated_stream_errors(star6):
    enc = lwc.lwc_encode(star6)
    with pytest.raises(MalformedStreamError):
        lwc.lwc_decode(enc.data[:-1])
    with pytest.raises(MalformedStreamError):
        lwc.lwc_decode(b"WRNG" + enc.data[4:])
