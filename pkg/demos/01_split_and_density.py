"""Graphs, density, and the degree-threshold split.

Every edge lands in the light part when both endpoint degrees stay at or
below the threshold, otherwise in the heavy part.  The heavy vertex set
collects everything that exceeds the threshold or touches such a vertex.
"""

from sgcodec import Graph, degree_histogram, density, matrix_lp_norm, split

# two 4-cycles joined through a middle path: degrees 2,2,2,3,3,2,2,2
g = Graph(8, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (4, 6), (5, 7), (6, 7)])

print("n =", g.n, " m =", g.m)
print("density 2m/n^2       =", density(g))
print("normalized L1 norm   =", matrix_lp_norm(g, 1))
print("normalized L2 norm   =", matrix_lp_norm(g, 2))
print("degree histogram     =", degree_histogram(g))

for delta in (1.0, 2.0, 3.0):
    sr = split(g, delta)
    print(
        f"split at {delta}: light m={sr.light.m}  heavy m={sr.heavy.m}  "
        f"heavy set={sr.heavy_set}  eta={sr.eta:.3f}"
    )

# the split at 2 isolates the two degree-3 vertices and their neighbors
sr = split(g, 2.0)
print("heavy edges:", sr.heavy.edges())
print("light edges:", sr.light.edges())
