"""Block estimation by constrained least squares: exact brute force at tiny
sizes, spectral embedding plus size-constrained moves otherwise.

The fitted matrix for a fixed assignment is always the block average of the
adjacency matrix; the search is only over assignments whose nonempty classes
have at least ceil(n/beta) vertices.
"""

import math
from dataclasses import dataclass
from itertools import product

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import BudgetExceededError, SgcError
from .graph import Graph

_EXACT_MAX_N = 12
_EXACT_MAX_CLASSES = 3
_MAX_RELOCATION_PASSES = 40


@dataclass
class LsFit:
    beta: float
    assignment: tuple  # vertex -> class in [0, floor(beta))
    B: np.ndarray  # fitted block matrix, floor(beta) x floor(beta)
    objective: float  # normalized L2 distance between A and the fitted matrix
    class_sizes: tuple
    edge_counts: np.ndarray  # m_ij; diagonal holds within-class edge counts

    @property
    def k(self) -> int:
        return len(self.class_sizes)


def _min_class_size(n: int, beta: float) -> int:
    return math.ceil(n / beta)


def _edge_count_matrix(g: Graph, assignment, k: int) -> np.ndarray:
    m = np.zeros((k, k), dtype=np.int64)
    for u, v in g.edges():
        a, b = assignment[u], assignment[v]
        if a == b:
            m[a, a] += 1
        else:
            m[a, b] += 1
            m[b, a] += 1
    return m


def block_average(g: Graph, assignment, k: int = None):
    """Block-average matrix B (the L2-optimal fill-in for the assignment) and
    the per-block edge counts."""
    if len(assignment) != g.n:
        raise SgcError("assignment must cover every vertex")
    if k is None:
        k = max(assignment) + 1 if assignment else 1
    sizes = np.bincount(np.asarray(assignment, dtype=np.int64), minlength=k)
    counts = _edge_count_matrix(g, assignment, k)
    B = np.zeros((k, k), dtype=float)
    for i in range(k):
        if sizes[i] == 0:
            continue
        B[i, i] = 2.0 * counts[i, i] / (sizes[i] * sizes[i])
        for j in range(i + 1, k):
            if sizes[j] == 0:
                continue
            B[i, j] = B[j, i] = counts[i, j] / (sizes[i] * sizes[j])
    return B, counts


def _objective_sq(sizes, counts):
    """n^2 * ||A - B^pi||_2^2 for the block-average B, via per-block sums:
    sum A^2 - sum S_b^2/cells_b over ordered class pairs."""
    val = 0.0
    k = len(sizes)
    for i in range(k):
        if sizes[i] == 0:
            continue
        s = 2.0 * counts[i, i]
        cells = float(sizes[i]) * sizes[i]
        val += s * s / cells
        for j in range(k):
            if j == i or sizes[j] == 0:
                continue
            s = float(counts[i, j])
            val += s * s / (float(sizes[i]) * sizes[j])
    ones = 0.0
    for i in range(k):
        ones += 2.0 * counts[i, i]
        for j in range(k):
            if j != i:
                ones += counts[i, j]
    return ones - val


def _objective(g: Graph, assignment, k: int) -> float:
    sizes = np.bincount(np.asarray(assignment, dtype=np.int64), minlength=k)
    counts = _edge_count_matrix(g, assignment, k)
    sq = _objective_sq(sizes, counts)
    return math.sqrt(max(sq, 0.0)) / g.n


def _make_fit(g: Graph, assignment, beta: float) -> LsFit:
    k = max(1, int(beta))
    assignment = tuple(int(a) for a in assignment)
    B, counts = block_average(g, assignment, k)
    sizes = tuple(int(x) for x in np.bincount(np.asarray(assignment), minlength=k))
    return LsFit(
        beta=float(beta),
        assignment=assignment,
        B=B,
        objective=_objective(g, assignment, k),
        class_sizes=sizes,
        edge_counts=counts,
    )


def ls_exact(g: Graph, beta: float) -> LsFit:
    """Global optimum over all size-constrained assignments; ties broken by
    the lexicographically smallest assignment vector.  Brute force, so capped
    at n <= 12 and floor(beta) <= 3."""
    n = g.n
    bf = int(beta)
    if bf < 1:
        raise SgcError("beta must be at least 1")
    if n > _EXACT_MAX_N or bf > _EXACT_MAX_CLASSES:
        raise BudgetExceededError(
            f"exact search capped at n<={_EXACT_MAX_N}, classes<={_EXACT_MAX_CLASSES}"
        )
    min_size = _min_class_size(n, beta)
    best = None
    best_obj = None
    for assignment in product(range(bf), repeat=n):
        sizes = [0] * bf
        for a in assignment:
            sizes[a] += 1
        if any(0 < s < min_size for s in sizes):
            continue
        counts = _edge_count_matrix(g, assignment, bf)
        sq = _objective_sq(sizes, counts)
        if best_obj is None or sq < best_obj - 1e-12:
            best_obj = sq
            best = assignment
    return _make_fit(g, best, beta)


def _spectral_embedding(g: Graph, k: int, seed: int) -> np.ndarray:
    n = g.n
    if g.m == 0:
        return np.zeros((n, max(k, 1)))
    rows, cols = [], []
    for u, v in g.edges():
        rows += [u, v]
        cols += [v, u]
    A = sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    if k >= n - 1 or n < 4:
        w, vecs = np.linalg.eigh(A.toarray())
        idx = np.argsort(-np.abs(w))[:k]
        return vecs[:, idx]
    rng = np.random.default_rng(seed)
    v0 = rng.uniform(-1, 1, size=n)
    w, vecs = spla.eigsh(A, k=k, which="LM", v0=v0)
    idx = np.argsort(-np.abs(w))
    return vecs[:, idx]


def _kmeans(points: np.ndarray, k: int, seed: int):
    n = len(points)
    rng = np.random.default_rng(seed + 1)
    centers = points[rng.choice(n, size=1)]
    # k-means++ style greedy spread, deterministic given seed
    for _ in range(1, k):
        d2 = np.min(
            ((points[:, None, :] - centers[None, :, :]) ** 2).sum(-1), axis=1
        )
        total = d2.sum()
        if total <= 0:
            centers = np.vstack([centers, points[rng.choice(n, size=1)]])
            continue
        centers = np.vstack([points[np.argmax(d2)][None, :], centers])
    labels = np.zeros(n, dtype=np.int64)
    for _ in range(100):
        d2 = ((points[:, None, :] - centers[None, :, :]) ** 2).sum(-1)
        new = np.argmin(d2, axis=1)
        if np.array_equal(new, labels):
            break
        labels = new
        for c in range(k):
            mask = labels == c
            if mask.any():
                centers[c] = points[mask].mean(axis=0)
    return labels


def _repair_sizes(labels, points, k_eff: int, min_size: int):
    """Move vertices so every used class is empty or >= min_size."""
    labels = labels.copy()
    while True:
        sizes = np.bincount(labels, minlength=k_eff)
        small = [c for c in range(k_eff) if 0 < sizes[c] < min_size]
        if not small:
            return labels
        c = small[0]
        donors = [d for d in range(k_eff) if d != c and sizes[d] > min_size]
        if not donors:
            # no donor can spare a vertex: fold the undersized class away
            others = [d for d in range(k_eff) if d != c and sizes[d] > 0]
            if not others:
                labels[:] = c
                return labels
            tgt = others[0]
            labels[labels == c] = tgt
            continue
        # pull the donor vertex closest to this class's centroid
        centroid = points[labels == c].mean(axis=0)
        best_v, best_d = None, None
        for d in donors:
            for v in np.flatnonzero(labels == d):
                dist = float(((points[v] - centroid) ** 2).sum())
                if best_d is None or dist < best_d:
                    best_d, best_v = dist, v
        labels[best_v] = c


def ls_heuristic(g: Graph, beta: float, seed: int = 0) -> LsFit:
    """Deterministic-given-seed fit: spectral embedding on the top floor(beta)
    eigenvectors, size-constrained clustering, then single-vertex relocation
    passes.  The objective never increases across passes."""
    n = g.n
    bf = int(beta)
    if bf < 1:
        raise SgcError("beta must be at least 1")
    if bf == 1 or n == 0:
        return _make_fit(g, [0] * n, beta)
    min_size = _min_class_size(n, beta)
    k_eff = max(1, min(bf, n // max(min_size, 1)))
    if k_eff == 1:
        return _make_fit(g, [0] * n, beta)

    points = _spectral_embedding(g, k_eff, seed)
    labels = _kmeans(points, k_eff, seed)
    labels = _repair_sizes(labels, points, k_eff, min_size)

    # relocation: steepest single-vertex moves while they help
    sizes = np.bincount(labels, minlength=bf).astype(np.int64)
    counts = _edge_count_matrix(g, labels, bf)
    cur = _objective_sq(sizes, counts)
    d_vc = np.zeros((n, bf), dtype=np.int64)
    for u, v in g.edges():
        d_vc[u, labels[v]] += 1
        d_vc[v, labels[u]] += 1

    def apply_move(v, a, b):
        for c in range(bf):
            dv = d_vc[v, c]
            if dv == 0:
                continue
            if c == a:
                counts[a, a] -= dv
            else:
                counts[a, c] -= dv
                counts[c, a] -= dv
            if c == b:
                counts[b, b] += dv
            else:
                counts[b, c] += dv
                counts[c, b] += dv
        sizes[a] -= 1
        sizes[b] += 1
        for w in g.adj[v]:
            d_vc[w, a] -= 1
            d_vc[w, b] += 1
        labels[v] = b

    for _ in range(_MAX_RELOCATION_PASSES):
        improved = False
        for v in range(n):
            a = labels[v]
            if sizes[a] <= min_size:
                continue
            best_gain, best_b = 0.0, None
            for b in range(bf):
                if b == a or sizes[b] == 0:
                    continue
                apply_move(v, a, b)
                cand = _objective_sq(sizes, counts)
                apply_move(v, b, a)
                gain = cur - cand
                if gain > best_gain + 1e-12:
                    best_gain, best_b = gain, b
            if best_b is not None:
                apply_move(v, a, best_b)
                cur -= best_gain
                improved = True
        if not improved:
            break
    return _make_fit(g, labels, beta)
