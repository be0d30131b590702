"""Encoder for the heavy part of the split: the affected vertex set, its edge
count, the block assignment restricted to those vertices, and per-block
enumerative codes for the edge positions.

The decoder recovers the block parameter from the transmitted edge count
alone, so no estimator output travels beyond the restricted assignment.
"""

import math
from dataclasses import dataclass

from .bitcode import (
    LN2,
    BitReader,
    CodeStream,
    read_subset,
    triangle_cells_to_pairs,
    write_subset,
)
from .errors import MalformedStreamError, SgcError
from .graph import Graph, SplitResult
from .intmath import log_comb
from .lsfit import LsFit

ELL1_SECTIONS = ("heavy/r_len", "heavy/r_rank", "heavy/m_star", "heavy/tau")


def phi(x: float) -> float:
    """sqrt(x)/log(x) beyond e^2, otherwise 1; nondecreasing."""
    if x < 0:
        raise SgcError("phi needs x >= 0")
    e2 = math.exp(2.0)
    if x > e2:
        return math.sqrt(x) / math.log(x)
    return 1.0


@dataclass(frozen=True)
class Schedule:
    """Block-count schedule driven by the heavy edge density."""

    alpha: float
    beta: float
    beta_floor: int


def schedule(m_star: int, n: int) -> Schedule:
    """alpha = exp(floor(log(m_star/n))), beta = phi(alpha)."""
    if m_star < 1 or n < 1:
        raise SgcError("schedule needs m_star >= 1 and n >= 1")
    alpha = math.exp(math.floor(math.log(m_star / n)))
    beta = phi(alpha)
    return Schedule(alpha=alpha, beta=beta, beta_floor=max(1, int(beta)))


@dataclass
class HeavyEncoding:
    stream: CodeStream
    r_set: tuple
    m_star: int
    beta: float
    beta_floor: int
    block_sizes: tuple  # n*_i for classes nonempty inside the heavy set
    block_counts: dict  # (i, j) i<=j -> m*_ij over those classes
    ell1_measured: float  # nats of the set/count/assignment sections
    ell2_measured: float  # nats of the block sections

    @property
    def nats(self) -> float:
        return self.stream.nats


def _relabel_classes(fit: LsFit, r_set) -> list:
    """Class labels reordered so classes nonempty inside the heavy set come
    first, then remaining nonempty classes, then empty ones; deterministic
    given the fit, so the decoder needs nothing beyond the symbols."""
    bf = fit.k
    in_r = [0] * bf
    for v in r_set:
        in_r[fit.assignment[v]] += 1
    order = sorted(
        range(bf),
        key=lambda c: (0 if in_r[c] > 0 else (1 if fit.class_sizes[c] > 0 else 2), c),
    )
    newlabel = [0] * bf
    for new, old in enumerate(order):
        newlabel[old] = new
    return newlabel


def _block_cells_diag(members, n_i):
    return n_i * (n_i - 1) // 2


def heavy_encode(g_full: Graph, sr: SplitResult, fit: LsFit = None) -> HeavyEncoding:
    """Encode the heavy part of a split.  The fit must come from the full
    graph with the scheduled beta (checked); it may be omitted when the heavy
    set is empty."""
    n = g_full.n
    r_set = sr.heavy_set
    m_star = sr.heavy.m
    s = CodeStream()
    s.begin_section("heavy/r_len")
    s.write_uint(len(r_set), n)
    if len(r_set) == 0:
        return HeavyEncoding(
            stream=s, r_set=r_set, m_star=0, beta=1.0, beta_floor=1,
            block_sizes=(), block_counts={},
            ell1_measured=s.nats, ell2_measured=0.0,
        )

    sched = schedule(m_star, n)
    if fit is None:
        raise SgcError("nonempty heavy set needs a block fit")
    if abs(fit.beta - sched.beta) > 1e-9:
        raise SgcError(
            f"fit/beta mismatch: fit has {fit.beta}, schedule wants {sched.beta}"
        )

    s.begin_section("heavy/r_rank")
    write_subset(s, list(r_set), n, len(r_set))
    s.begin_section("heavy/m_star")
    s.write_uint(m_star, n * (n - 1) // 2)

    newlabel = _relabel_classes(fit, r_set)
    bf = fit.k
    sym_width_max = bf - 1  # symbols live in [0, floor(beta))
    s.begin_section("heavy/tau")
    tau = [newlabel[fit.assignment[v]] for v in r_set]
    for sym in tau:
        s.write_uint(sym, sym_width_max)

    # members of each heavy-active class, ascending vertex order
    classes: dict[int, list] = {}
    for v, sym in zip(r_set, tau):
        classes.setdefault(sym, []).append(v)
    beta_star = len(classes)
    if sorted(classes) != list(range(beta_star)):
        raise SgcError("heavy-class relabeling must be contiguous")

    heavy = sr.heavy
    rr = len(r_set)
    block_sizes = tuple(len(classes[i]) for i in range(beta_star))
    block_counts = {}
    for i in range(beta_star):
        for j in range(i, beta_star):
            mem_i = classes[i]
            mem_j = classes[j]
            pos_j = {v: t for t, v in enumerate(mem_j)}
            cells = []
            if i == j:
                k = len(mem_i)
                pos_i = pos_j
                for a_idx, v in enumerate(mem_i):
                    for w in heavy.adj[v]:
                        b_idx = pos_i.get(w, -1)
                        if b_idx > a_idx:
                            cells.append(
                                a_idx * (2 * k - a_idx - 1) // 2 + (b_idx - a_idx - 1)
                            )
                n_cells = k * (k - 1) // 2
            else:
                for a_idx, v in enumerate(mem_i):
                    for w in heavy.adj[v]:
                        b_idx = pos_j.get(w, -1)
                        if b_idx >= 0:
                            cells.append(a_idx * len(mem_j) + b_idx)
                n_cells = len(mem_i) * len(mem_j)
            cells.sort()
            m_ij = len(cells)
            block_counts[(i, j)] = m_ij
            s.begin_section(f"heavy/block_count_{i}_{j}")
            s.write_uint(m_ij, rr * rr)
            s.begin_section(f"heavy/block_rank_{i}_{j}")
            write_subset(s, cells, n_cells, m_ij)

    if sum(block_counts.values()) != m_star:
        raise SgcError("block edge counts fail to cover the heavy part")

    ell1 = sum(b for (lab, b) in s.sections if lab in ELL1_SECTIONS) * LN2
    ell2 = s.nats - ell1
    return HeavyEncoding(
        stream=s, r_set=r_set, m_star=m_star, beta=sched.beta,
        beta_floor=sched.beta_floor, block_sizes=block_sizes,
        block_counts=block_counts, ell1_measured=ell1, ell2_measured=ell2,
    )


def heavy_decode(r: BitReader, n: int) -> Graph:
    """Decode a heavy part written by heavy_encode."""
    r_len = r.read_uint(n)
    if r_len == 0:
        return Graph(n, [])
    r_set = read_subset(r, n, r_len)
    m_star = r.read_uint(n * (n - 1) // 2)
    if m_star < 1:
        raise MalformedStreamError("nonempty heavy set with no edges", r.byte_offset)
    sched = schedule(m_star, n)
    bf = sched.beta_floor
    tau = [r.read_uint(bf - 1) for _ in range(r_len)]
    classes: dict[int, list] = {}
    for v, sym in zip(r_set, tau):
        classes.setdefault(sym, []).append(v)
    beta_star = len(classes)
    if sorted(classes) != list(range(beta_star)):
        raise MalformedStreamError(
            "heavy class symbols are not contiguous", r.byte_offset
        )
    edges = []
    total = 0
    for i in range(beta_star):
        for j in range(i, beta_star):
            mem_i = classes[i]
            mem_j = classes[j]
            if i == j:
                k = len(mem_i)
                n_cells = k * (k - 1) // 2
            else:
                n_cells = len(mem_i) * len(mem_j)
            m_ij = r.read_uint(len(r_set) ** 2)
            cells = read_subset(r, n_cells, m_ij)
            total += m_ij
            if i == j:
                k = len(mem_i)
                for a_idx, b_idx in triangle_cells_to_pairs(cells, k):
                    edges.append((mem_i[a_idx], mem_i[b_idx]))
            else:
                w = len(mem_j)
                for c in cells:
                    edges.append((mem_i[c // w], mem_j[c % w]))
    if total != m_star:
        raise MalformedStreamError(
            f"block counts sum to {total}, expected {m_star}", r.byte_offset
        )
    return Graph(n, edges)


def lemma51_budget(n, r_size, m_star, beta, block_sizes, block_counts):
    """Per-part codeword budgets (nats) for the heavy section.

    Returns (ell1, ell2); for an empty heavy set ell1 degenerates to
    1 + log n and ell2 to 0.
    """
    if r_size == 0:
        return (1.0 + math.log(n), 0.0) if n >= 1 else (0.0, 0.0)
    ell1 = (
        3.0
        + r_size
        + 3.0 * math.log(n)
        + log_comb(n, r_size)
        + r_size * math.log(beta)
    )
    beta_star = len(block_sizes)
    ell2 = 2.0 * beta_star**2
    log_r = math.log(r_size)
    for i in range(beta_star):
        ni = block_sizes[i]
        ell2 += 2.0 * log_r + log_comb(ni * (ni - 1) // 2, block_counts[(i, i)])
        for j in range(i + 1, beta_star):
            ell2 += 2.0 * log_r + log_comb(
                ni * block_sizes[j], block_counts[(i, j)]
            )
    return ell1, ell2


def fitted_graphons(fit: LsFit, sr: SplitResult):
    """Fitted step graphons for the full graph and for its heavy part, both
    weighted by the full class sizes."""
    from .graphon import BlockGraphon

    n = len(fit.assignment)
    bf = fit.k
    p = [s / n for s in fit.class_sizes]

    def lam(counts):
        import numpy as np

        B = np.zeros((bf, bf))
        for i in range(bf):
            ni = fit.class_sizes[i]
            if ni == 0:
                continue
            B[i, i] = 2.0 * counts[i][i] / (ni * ni)
            for j in range(i + 1, bf):
                nj = fit.class_sizes[j]
                if nj == 0:
                    continue
                B[i, j] = B[j, i] = counts[i][j] / (ni * nj)
        return B

    full_counts = [[int(fit.edge_counts[i, j]) for j in range(bf)] for i in range(bf)]
    heavy_counts = [[0] * bf for _ in range(bf)]
    for u, v in sr.heavy.edges():
        a, b = fit.assignment[u], fit.assignment[v]
        if a == b:
            heavy_counts[a][a] += 1
        else:
            heavy_counts[a][b] += 1
            heavy_counts[b][a] += 1
    w_hat = BlockGraphon(p, lam(full_counts))
    w_hat_star = BlockGraphon(p, lam(heavy_counts))
    return w_hat, w_hat_star
