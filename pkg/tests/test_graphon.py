import math

import numpy as np
import pytest

from sgcodec.errors import ConfigError, SgcError
from sgcodec.graphon import (
    BlockGraphon,
    GridGraphon,
    LatentStream,
    PowerLawGraphon,
    _coupling_value,
    conditional_expected_edges,
    delta2_identity,
    delta2_upper,
    ent,
    graphon_norm,
    latent_positions,
    load_graphon,
    sample_w_random,
)

ONE = BlockGraphon([1.0], [[1.0]])
DIAG2 = BlockGraphon([0.5, 0.5], [[2.0, 0.0], [0.0, 2.0]])
TWOBLOCK = BlockGraphon([0.5, 0.5], [[1.5, 0.5], [0.5, 1.5]])


def test_norm_examples():
    assert graphon_norm(ONE, 1) == 1.0
    assert graphon_norm(ONE, 5) == 1.0
    assert graphon_norm(DIAG2, 1) == pytest.approx(1.0)
    assert graphon_norm(DIAG2, 2) == pytest.approx(math.sqrt(2))
    with pytest.raises(SgcError):
        graphon_norm(ONE, 0.3)


def test_ent_examples():
    assert ent(ONE) == 0.0
    assert ent(DIAG2) == pytest.approx(math.log(2))
    assert ent(TWOBLOCK) == pytest.approx(0.13081, abs=1e-5)


def test_ent_scaling_and_nonnegativity():
    gen = np.random.default_rng(5)
    for _ in range(100):
        k = int(gen.integers(1, 6))
        p = gen.dirichlet(np.ones(k))
        raw = gen.uniform(0, 3, (k, k))
        w = BlockGraphon(p, (raw + raw.T) / 2)
        e = ent(w)
        assert e >= -1e-13
        for alpha in (0.5, 2.0, 3.0):
            scaled = ent(BlockGraphon(p, alpha * w.B))
            assert abs(scaled - alpha * e) <= 1e-12 * max(1.0, abs(alpha * e))


def test_powerlaw_family():
    pw = PowerLawGraphon(0.25)
    assert graphon_norm(pw, 1) == pytest.approx(1.0)
    assert pw.ent_exact() == pytest.approx(2 * math.log(0.75) + 0.5 / 0.75)
    with pytest.raises(SgcError):
        PowerLawGraphon(0.7)


def test_powerlaw_grid_refinement():
    pw = PowerLawGraphon(0.25)
    gaps = []
    prev = None
    for r in (64, 128, 256, 512):
        e = ent(pw.to_grid(r, cell_average=True))
        if prev is not None:
            gaps.append(abs(e - prev))
        prev = e
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] <= 1e-3


def test_latent_stream_prefix_stability():
    xs = LatentStream(42)
    u5 = xs.uniforms(5)
    u9 = xs.uniforms(9)
    assert np.array_equal(u5, u9[:5])
    assert np.array_equal(LatentStream(42).uniforms(9), u9)


def test_sampling_determinism_and_clamps():
    g1 = sample_w_random(ONE, 50, 0.2, LatentStream(7))
    g2 = sample_w_random(ONE, 50, 0.2, LatentStream(7))
    assert g1 == g2
    assert sample_w_random(ONE, 6, 1.0, LatentStream(3)).m == 15
    assert sample_w_random(ONE, 6, 0.0, LatentStream(3)).m == 0


def test_sampling_mean():
    ms = [sample_w_random(ONE, 100, 0.1, LatentStream(s)).m for s in range(200)]
    sigma = math.sqrt(495 * 0.9 / 200)
    assert abs(float(np.mean(ms)) - 495) < 3 * sigma


def test_unnormalized_warns():
    with pytest.warns(UserWarning):
        sample_w_random(BlockGraphon([1.0], [[2.0]]), 5, 0.1, LatentStream(1))


def test_conditional_expected_edges():
    assert conditional_expected_edges(ONE, 0.1, LatentStream(11), 100) == (
        pytest.approx(495.0)
    )
    assert conditional_expected_edges(ONE, 0.0, LatentStream(11), 50) == 0.0
    xs = LatentStream(123)
    x = latent_positions(TWOBLOCK, xs, 4)
    hand = sum(
        min(1.0, 0.3 * TWOBLOCK.B[x[i], x[j]])
        for i in range(4)
        for j in range(i + 1, 4)
    )
    assert conditional_expected_edges(TWOBLOCK, 0.3, xs, 4) == pytest.approx(hand)


def test_delta2_upper_cases():
    assert delta2_upper(TWOBLOCK, TWOBLOCK) < 1e-12
    asym = BlockGraphon([0.5, 0.5], [[2.0, 0.5], [0.5, 1.0]])
    swapped = BlockGraphon([0.5, 0.5], [[1.0, 0.5], [0.5, 2.0]])
    assert delta2_upper(asym, swapped) < 1e-12  # permutation coupling
    c1 = BlockGraphon([1.0], [[1.0]])
    c2 = BlockGraphon([1.0], [[2.0]])
    assert delta2_upper(c1, c2) == pytest.approx(1.0)


def test_delta2_never_above_product(rng):
    gen = np.random.default_rng(2)
    for _ in range(15):
        k1, k2 = int(gen.integers(1, 5)), int(gen.integers(1, 5))
        p = gen.dirichlet(np.ones(k1))
        q = gen.dirichlet(np.ones(k2))
        raw1 = gen.uniform(0, 2, (k1, k1))
        raw2 = gen.uniform(0, 2, (k2, k2))
        w1 = BlockGraphon(p, (raw1 + raw1.T) / 2)
        w2 = BlockGraphon(q, (raw2 + raw2.T) / 2)
        prod = math.sqrt(max(_coupling_value(np.outer(p, q), w1.B, w2.B), 0.0))
        assert delta2_upper(w1, w2, effort=1) <= prod + 1e-12


def test_delta2_identity():
    asym = BlockGraphon([0.5, 0.5], [[2.0, 0.5], [0.5, 1.0]])
    swapped = BlockGraphon([0.5, 0.5], [[1.0, 0.5], [0.5, 2.0]])
    assert delta2_identity(asym, swapped) == pytest.approx(math.sqrt(0.5))
    assert delta2_identity(asym, asym) == 0.0
    with pytest.raises(SgcError):
        delta2_identity(asym, BlockGraphon([1.0], [[1.0]]))


def test_grid_graphon_as_block():
    grid = GridGraphon([[1.0, 0.5], [0.5, 2.0]])
    assert graphon_norm(grid, 1) == pytest.approx(1.0)
    blk = grid.as_block()
    assert np.allclose(blk.p, [0.5, 0.5])


def test_load_graphon_specs(tmp_path):
    p = tmp_path / "w.json"
    p.write_text('{"kind": "block", "p": [0.5, 0.5], "B": [[1.5,0.5],[0.5,1.5]]}')
    w = load_graphon(str(p))
    assert isinstance(w, BlockGraphon)
    assert load_graphon({"kind": "powerlaw", "a": 0.25}).a == 0.25
    assert load_graphon({"kind": "grid", "values": [[1.0]]}).r == 1
    with pytest.raises(ConfigError):
        load_graphon({"kind": "mystery"})
    with pytest.raises(ConfigError):
        load_graphon(str(tmp_path / "missing.json"))
