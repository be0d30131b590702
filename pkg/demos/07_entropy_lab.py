"""Entropy quantities: the graphon entropy functional, the per-edge rate
target 1 - Ent(W), tiny-size exact oracles, and the typical-count curve s(d).
"""

import math

from sgcodec import (
    BlockGraphon,
    PowerLawGraphon,
    binary_entropy,
    count_typical,
    ent,
    er_entropy_gap,
    h_exact_tiny,
    s_of_d,
    empirical_local_dist,
    Graph,
)
from sgcodec.intmath import log_comb

one = BlockGraphon([1.0], [[1.0]])
diag = BlockGraphon([0.5, 0.5], [[2.0, 0.0], [0.0, 2.0]])
mixed = BlockGraphon([0.5, 0.5], [[1.5, 0.5], [0.5, 1.5]])
print("Ent(1) =", ent(one))
print("Ent(2-block diagonal) =", ent(diag), "= log 2 =", math.log(2))
print("Ent(mixed 2-block) =", ent(mixed), " rate target 1-Ent =", 1 - ent(mixed))

# the unbounded power-law family has closed forms to check grids against
pw = PowerLawGraphon(0.25)
print("power-law Ent exact:", pw.ent_exact(), " grid 512:", ent(pw.to_grid(512, cell_average=True)))

# per-edge second-order rate of the constant graphon, exactly
for rho in (1e-2, 1e-3, 1e-4):
    print(f"  er_entropy_gap({rho}) = {er_entropy_gap(rho):.6f}")

# tiny-size exact entropy agrees with the closed form for the constant case
print("H(G3) at rho=0.3:", h_exact_tiny(one, 0.3, 3), "= 3 H_b(0.3) =", 3 * binary_entropy(0.3))

# the typical-count curve: s(2) shows up in the count of n-edge graphs
n = 2**14
value = (log_comb(n * (n - 1) // 2, n) - n * math.log(n)) / n
print("count curve at d=2, n=2^14:", value, " s(2) =", s_of_d(2.0))

# at tiny sizes the typical set can be counted outright
tri = Graph(3, [(0, 1), (0, 2), (1, 2)])
u = empirical_local_dist(tri, None)
print("graphs on 3 vertices within 0.4 of the triangle profile:", count_typical(3, 3, u, 0.4))
