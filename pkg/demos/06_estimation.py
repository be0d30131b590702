"""Block estimation by constrained least squares.

For a fixed assignment the optimal fill-in is the block average of the
adjacency matrix; the search over assignments is exact at tiny sizes and
spectral + relocation otherwise.  Fitted step graphons for a graph and for
its heavy part follow directly from the block edge counts.
"""

import numpy as np

from sgcodec import (
    BlockGraphon,
    Graph,
    block_average,
    delta2_upper,
    fitted_graphons,
    ls_exact,
    ls_heuristic,
    sample_w_random,
    split,
    LatentStream,
)

# two disjoint triangles: the component partition is the exact optimum
g = Graph(6, [(0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5)])
exact = ls_exact(g, 2.0)
print("exact fit:", exact.assignment, " objective:", exact.objective)
heur = ls_heuristic(g, 2.0, seed=0)
print("heuristic objective matches:", abs(heur.objective - exact.objective) < 1e-12)

B, counts = block_average(g, [0, 0, 0, 1, 1, 1], 2)
print("block averages:\n", B)

# estimation of a planted 2-block model at scale
W = BlockGraphon([0.5, 0.5], [[1.5, 0.5], [0.5, 1.5]])
n, rho = 2048, 2048**-0.5
sample = sample_w_random(W, n, rho, LatentStream(5))
fit = ls_heuristic(sample, 2.0, seed=0)
w_hat = BlockGraphon(np.array(fit.class_sizes, float) / n, fit.B / rho)
print("fitted values (rescaled):\n", np.round(w_hat.B, 3))
print("coupling distance to the truth:", round(delta2_upper(w_hat, W), 4))

# fitted graphons for the full graph and its heavy part share one mean law
sr = split(sample, 2.0)
w_full, w_heavy = fitted_graphons(fit, sr)
mean_heavy = float((np.outer(w_heavy.p, w_heavy.p) * w_heavy.B).sum())
print("heavy-part mean:", mean_heavy, "= 2 m*/n^2 =", 2 * sr.heavy.m / n**2)
