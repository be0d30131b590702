import math
import random
from itertools import combinations

import pytest

from sgcodec import bitcode as bc
from sgcodec.bitcode import (
    BitReader,
    CodeStream,
    rank_subset,
    read_subset,
    unrank_subset,
    write_subset,
)
from sgcodec.errors import CapacityError, MalformedStreamError, SgcError
from sgcodec.intmath import comb, subset_width, uint_width


def test_write_uint_widths():
    s = CodeStream()
    s.write_uint(5, 7)
    assert s.bit_length == 3
    s.write_uint(0, 0)
    assert s.bit_length == 3  # degenerate field adds nothing
    s.write_uint(9, 100)
    assert s.bit_length == 10  # ceil(log2 101) = 7
    assert uint_width(100) == 7
    with pytest.raises(SgcError):
        s.write_uint(8, 7)


def test_stream_accounting():
    s = CodeStream()
    s.begin_section("a")
    s.write_uint(5, 7)
    s.begin_section("b")
    s.write_uint(3, 3)
    assert s.sections == [["a", 3], ["b", 2]]
    assert s.bit_length == sum(b for _, b in s.sections)
    assert s.nats == pytest.approx(s.bit_length * math.log(2))


def test_rank_examples():
    assert rank_subset([0, 1], 4) == 0
    assert rank_subset([1, 3], 4) == 4
    assert rank_subset([2, 3], 4) == 5
    # full colex order of 2-subsets of [0,4)
    order = [(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (2, 3)]
    for i, sub in enumerate(order):
        assert rank_subset(list(sub), 4) == i
        assert unrank_subset(i, 4, 2) == list(sub)


def test_rank_rejections():
    with pytest.raises(SgcError):
        rank_subset([1, 1], 4)
    with pytest.raises(SgcError):
        rank_subset([2, 5], 4)
    with pytest.raises(SgcError):
        unrank_subset(6, 4, 2)


def test_bijection_random(rng):
    pyrng = rng
    for _ in range(3000):
        n_uni = pyrng.randrange(1, 5000)
        m = pyrng.randrange(0, min(n_uni, 60) + 1)
        els = sorted(pyrng.sample(range(n_uni), m))
        r = rank_subset(els, n_uni)
        assert 0 <= r < comb(n_uni, m)
        assert unrank_subset(r, n_uni, m) == els


def test_split_rank_bijection_exhaustive(monkeypatch):
    monkeypatch.setattr(bc, "_SPLIT_LEAF_M", 1)
    monkeypatch.setattr(bc, "_SPLIT_LEAF_N", 2)
    for n_uni in (5, 9, 12):
        for m in range(n_uni + 1):
            ranks = set()
            for els in combinations(range(n_uni), m):
                r = int(bc._split_rank(list(els), n_uni, m))
                assert 0 <= r < comb(n_uni, m)
                assert bc._split_unrank(r, n_uni, m) == list(els)
                ranks.add(r)
            assert len(ranks) == comb(n_uni, m)


def test_split_rank_roundtrip_large(rng):
    for _ in range(40):
        n_uni = rng.randrange(1000, 60000)
        m = rng.randrange(0, min(n_uni, 4000) + 1)
        els = sorted(rng.sample(range(n_uni), m))
        r = bc._split_rank(els, n_uni, m)
        assert 0 <= r < comb(n_uni, m)
        assert bc._split_unrank(r, n_uni, m) == els


def test_write_subset_examples():
    s = CodeStream()
    write_subset(s, [], 9, 0)
    assert s.bit_length == 0
    write_subset(s, list(range(9)), 9, 9)
    assert s.bit_length == 0
    write_subset(s, [1, 3], 6, 2)
    assert s.bit_length == 4  # ceil(log2 C(6,2)) = ceil(log2 15)
    data = s.to_bytes()
    assert BitReader(data).read_bits(4) == rank_subset([1, 3], 6)


def test_width_law(rng):
    for _ in range(200):
        n_uni = rng.randrange(1, 300)
        m = rng.randrange(0, n_uni + 1)
        els = sorted(rng.sample(range(n_uni), m))
        s = CodeStream()
        write_subset(s, els, n_uni, m)
        assert s.bit_length == subset_width(n_uni, m)
        assert read_subset(BitReader(s.to_bytes()), n_uni, m) == els


def test_interleaved_schedule(rng):
    # a scripted mix of fields must roundtrip exactly, in order
    script = []
    s = CodeStream()
    for _ in range(300):
        if rng.random() < 0.5:
            maxval = rng.randrange(0, 10000)
            val = rng.randrange(0, maxval + 1)
            s.write_uint(val, maxval)
            script.append(("uint", maxval, val))
        else:
            n_uni = rng.randrange(1, 400)
            m = rng.randrange(0, min(n_uni, 30) + 1)
            els = sorted(rng.sample(range(n_uni), m))
            write_subset(s, els, n_uni, m)
            script.append(("subset", n_uni, m, els))
    reader = BitReader(s.to_bytes())
    for item in script:
        if item[0] == "uint":
            assert reader.read_uint(item[1]) == item[2]
        else:
            assert read_subset(reader, item[1], item[2]) == item[3]
    assert reader.bits_consumed == s.bit_length


def test_truncation_reports_offset():
    s = CodeStream()
    s.write_uint(123, 10**6)
    data = s.to_bytes()
    reader = BitReader(data[:1])
    with pytest.raises(MalformedStreamError) as e:
        reader.read_uint(10**6)
    assert e.value.offset <= 1


def test_capacity_cap():
    s = CodeStream()
    with pytest.raises(CapacityError):
        write_subset(s, list(range(10**7)), 10**9, 10**7)
