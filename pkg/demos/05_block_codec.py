"""The heavy-part encoder and its per-part budget.

The heavy part of a split lives inside the affected vertex set.  The encoder
writes that set, the edge count (which alone determines the block parameter),
the block assignment restricted to the set, and one enumerative code per
block pair; the measured nats never exceed the budget bound.
"""

import math

from sgcodec import (
    BitReader,
    Graph,
    heavy_decode,
    heavy_encode,
    lemma51_budget,
    ls_heuristic,
    phi,
    schedule,
    split,
)

print("phi(e^2) =", phi(math.exp(2)), " phi(e^4) =", phi(math.exp(4)), " phi(100) =", phi(100.0))
s = schedule(50, 10)
print("schedule(m*=50, n=10): alpha =", s.alpha, " beta =", s.beta)

# a star: the entire graph is heavy at threshold 3, single block
star = Graph(6, [(0, i) for i in range(1, 6)])
sr = split(star, 3.0)
fit = ls_heuristic(star, schedule(sr.heavy.m, 6).beta, seed=0)
enc = heavy_encode(star, sr, fit)
print("star sections:", enc.stream.sections)
print("roundtrip:", heavy_decode(BitReader(enc.stream.to_bytes()), 6) == sr.heavy)

ell1, ell2 = lemma51_budget(
    6, len(sr.heavy_set), enc.m_star, enc.beta, enc.block_sizes, enc.block_counts
)
print(f"measured {enc.nats:.2f} nats <= budget {ell1 + ell2:.2f} nats")

# empty heavy set: the stream degenerates to a single length field
path = Graph(5, [(0, 1), (1, 2)])
sr = split(path, 3.0)
enc = heavy_encode(path, sr)
print("empty heavy part:", enc.stream.sections, "->", heavy_decode(BitReader(enc.stream.to_bytes()), 5).m, "edges")
