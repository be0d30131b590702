"""Rooted neighborhoods, canonical class keys, and distances.

The depth-h view from a vertex is an isomorphism class; equal canonical keys
mean equal classes.  A graph induces an empirical distribution over these
classes, and distributions compare through an exact Levy-Prokhorov distance.
"""

from fractions import Fraction

from sgcodec import (
    Graph,
    dist_degree,
    empirical_local_dist,
    lp_distance,
    neighborhood_class,
    rooted_ball,
    rooted_distance,
)

cycle10 = Graph(10, [(i, (i + 1) % 10) for i in range(10)])
path5 = Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])

# depth-2 view from any cycle vertex is a path of five vertices, seen from
# its center
print(
    "C10 depth-2 class == centered P5 class:",
    neighborhood_class(cycle10, 0, 2) == neighborhood_class(path5, 2, 2),
)

triangle = Graph(3, [(0, 1), (0, 2), (1, 2)])
square = Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
print(
    "triangle vs square, depth 1 differ:",
    neighborhood_class(triangle, 0, 1) != neighborhood_class(square, 0, 1),
)

# the rooted metric: 1/(1+h) at the deepest matching truncation
b5 = rooted_ball(Graph(5, [(i, (i + 1) % 5) for i in range(5)]), 0, None)
b6 = rooted_ball(Graph(6, [(i, (i + 1) % 6) for i in range(6)]), 0, None)
print("d(C5, C6 rooted) =", rooted_distance(b5, b6))  # agree at depth 1 only

# empirical neighborhood distribution of the joined-cycles graph at depth 2
g = Graph(8, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (4, 6), (5, 7), (6, 7)])
u2 = empirical_local_dist(g, 2)
print("depth-2 classes:", len(u2), " weights:", [str(w) for w in u2.weights])

u1 = empirical_local_dist(g, 1)
print("mean root degree:", dist_degree(u1), "= 2m/n =", Fraction(2 * g.m, g.n))

print("LP distance U_2(G) vs U_2(C10):", lp_distance(u2, empirical_local_dist(cycle10, 2)))
