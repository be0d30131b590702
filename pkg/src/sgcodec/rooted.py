"""Rooted depth-h neighborhoods: canonical isomorphism keys, the rooted
metric, empirical neighborhood distributions, and an exact Levy-Prokhorov
distance between finite-support measures on rooted classes.

Canonical keys come from color refinement with the root's color pinned,
followed by full individualization backtracking, so key equality is exact
isomorphism of the truncated rooted graphs.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import CapacityError, SgcError
from .graph import Graph


@dataclass(frozen=True)
class RootedGraph:
    """A small rooted graph, vertices 0..k-1, used as a class representative."""

    adj: tuple
    root: int

    @property
    def k(self) -> int:
        return len(self.adj)

    def root_degree(self) -> int:
        return len(self.adj[self.root])

    def eccentricity(self) -> int:
        return max(_bfs_dist(self.adj, self.root))


@dataclass(frozen=True, eq=False)
class RootedClass:
    """Canonical key for the isomorphism class of a depth-h rooted graph.

    Identity lives in the canon bytes alone; depth records how the key was
    produced (an isolated root is the same class at every depth).
    """

    depth: int
    canon: bytes

    def __eq__(self, other):
        return isinstance(other, RootedClass) and self.canon == other.canon

    def __hash__(self):
        return hash(self.canon)


def _bfs_dist(adj, root):
    dist = [-1] * len(adj)
    dist[root] = 0
    q = [root]
    for v in q:
        for w in adj[v]:
            if dist[w] < 0:
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


def rooted_ball(g: Graph, root: int, h) -> RootedGraph:
    """Induced subgraph on vertices within distance h of root (h=None: the
    whole connected component), relabeled with the root first in BFS order."""
    if root >= g.n or root < 0:
        raise SgcError(f"root {root} out of range for n={g.n}")
    dist = {root: 0}
    order = [root]
    for v in order:
        if h is not None and dist[v] >= h:
            continue
        for w in g.adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                order.append(w)
    index = {v: i for i, v in enumerate(order)}
    adj = tuple(
        tuple(sorted(index[w] for w in g.adj[v] if w in index)) for v in order
    )
    return RootedGraph(adj=adj, root=0)


def _truncate(rg: RootedGraph, h: int) -> RootedGraph:
    dist = _bfs_dist(rg.adj, rg.root)
    keep = [v for v in range(rg.k) if 0 <= dist[v] <= h]
    index = {v: i for i, v in enumerate(keep)}
    adj = tuple(
        tuple(sorted(index[w] for w in rg.adj[v] if w in index)) for v in keep
    )
    return RootedGraph(adj=adj, root=index[rg.root])


def _canon_bytes(adj, root) -> bytes:
    """Canonical byte encoding: vertex count then adjacency bits of the
    canonically relabeled graph (root always lands at position 0)."""
    k = len(adj)
    if k > 255:
        raise CapacityError(f"rooted neighborhood too large to canonize ({k} vertices)")
    if k == 1:
        return bytes([1])

    dist = _bfs_dist(adj, root)

    def normalize(colors):
        ranks = {c: i for i, c in enumerate(sorted(set(colors)))}
        return [ranks[c] for c in colors]

    def refine(colors):
        colors = normalize(colors)
        while True:
            sigs = [
                (colors[v], tuple(sorted(colors[w] for w in adj[v])))
                for v in range(k)
            ]
            new = normalize(sigs)
            if len(set(new)) == len(set(colors)):
                return new
            colors = new

    best = [None]

    def emit(colors):
        # all cells singleton: colors are a bijection onto 0..k-1
        pos = colors
        bits = bytearray((k * (k - 1) // 2 + 7) // 8)
        idx = 0
        inv = [0] * k
        for v in range(k):
            inv[pos[v]] = v
        for i in range(k):
            vi = inv[i]
            nb = set(adj[vi])
            for j in range(i + 1, k):
                if inv[j] in nb:
                    bits[idx >> 3] |= 0x80 >> (idx & 7)
                idx += 1
        cand = bytes([k]) + bytes(bits)
        if best[0] is None or cand < best[0]:
            best[0] = cand

    def search(colors):
        colors = refine(colors)
        target = -1
        for c in sorted(set(colors)):
            if sum(1 for x in colors if x == c) > 1:
                target = c
                break
        if target < 0:
            emit(colors)
            return
        for v in range(k):
            if colors[v] == target:
                branched = [
                    2 * colors[u] + (0 if u == v else 1)
                    if colors[u] == target
                    else 2 * colors[u]
                    for u in range(k)
                ]
                search(branched)

    search(dist)
    return best[0]


def canonical_class(rg: RootedGraph, depth: int) -> RootedClass:
    return RootedClass(depth=depth, canon=_canon_bytes(rg.adj, rg.root))


def neighborhood_class(g: Graph, root: int, h: int) -> RootedClass:
    """Isomorphism class of the depth-h neighborhood of root (h >= 0)."""
    if h < 0:
        raise SgcError("depth must be nonnegative")
    return canonical_class(rooted_ball(g, root, h), depth=h)


def rooted_distance(a: RootedGraph, b: RootedGraph) -> Fraction:
    """Rooted metric 1/(1+h^) where h^ is the deepest matching truncation;
    0 when the rooted graphs agree at every available depth."""
    hmax = max(a.eccentricity(), b.eccentricity())
    for h in range(1, hmax + 1):
        ca = _canon_bytes(*_trunc_pair(a, h))
        cb = _canon_bytes(*_trunc_pair(b, h))
        if ca != cb:
            return Fraction(1, h)
    return Fraction(0)


def _trunc_pair(rg: RootedGraph, h: int):
    t = _truncate(rg, h)
    return t.adj, t.root


class LocalDist:
    """Finite-support probability measure on rooted classes.

    Weights are exact rationals summing to 1; a full rooted representative is
    kept per class so distances between classes stay computable.
    """

    def __init__(self, depth, classes, weights, reps):
        if len(classes) != len(weights) or len(classes) != len(reps):
            raise SgcError("support arrays must align")
        if any(w <= 0 for w in weights):
            raise SgcError("weights must be positive")
        if sum(weights, Fraction(0)) != 1:
            raise SgcError("weights must sum to exactly 1")
        if len({c.canon for c in classes}) != len(classes):
            raise SgcError("support keys must be distinct")
        order = sorted(range(len(classes)), key=lambda i: classes[i].canon)
        self.depth = depth
        self.classes = tuple(classes[i] for i in order)
        self.weights = tuple(Fraction(weights[i]) for i in order)
        self.reps = tuple(reps[i] for i in order)

    def __len__(self):
        return len(self.classes)

    def as_dict(self):
        return {c: w for c, w in zip(self.classes, self.weights)}

    def __eq__(self, other):
        return (
            isinstance(other, LocalDist)
            and self.classes == other.classes
            and self.weights == other.weights
        )


def empirical_local_dist(g: Graph, h) -> LocalDist:
    """Depth-h empirical neighborhood distribution (uniform random root).

    h=None uses the full connected component of each root.
    """
    if g.n == 0:
        raise SgcError("empirical distribution needs at least one vertex")
    buckets: dict[bytes, list] = {}
    for v in range(g.n):
        ball = rooted_ball(g, v, h)
        key = _canon_bytes(ball.adj, ball.root)
        entry = buckets.get(key)
        if entry is None:
            buckets[key] = [1, ball]
        else:
            entry[0] += 1
    depth = h if h is not None else -1
    classes, weights, reps = [], [], []
    for key, (count, ball) in buckets.items():
        classes.append(RootedClass(depth=depth, canon=key))
        weights.append(Fraction(count, g.n))
        reps.append(ball)
    return LocalDist(depth, classes, weights, reps)


def dist_degree(d: LocalDist) -> Fraction:
    """Expected root degree under the measure (needs depth >= 1 truncations)."""
    if d.depth == 0:
        raise SgcError("root degree is not visible at depth 0")
    total = Fraction(0)
    for w, rep in zip(d.weights, d.reps):
        total += w * rep.root_degree()
    return total


def _max_matching_mass(w1, w2, allowed) -> Fraction:
    """Max coupling mass using only allowed (i, j) pairs, by exact max-flow."""
    n1, n2 = len(w1), len(w2)
    # node ids: source=0, left 1..n1, right n1+1..n1+n2, sink last
    src, snk = 0, n1 + n2 + 1
    cap: dict[tuple, Fraction] = {}
    for i in range(n1):
        cap[(src, 1 + i)] = Fraction(w1[i])
    for j in range(n2):
        cap[(n1 + 1 + j, snk)] = Fraction(w2[j])
    for i, j in allowed:
        cap[(1 + i, n1 + 1 + j)] = Fraction(2)  # effectively infinite
    adj = {v: set() for v in range(snk + 1)}
    for (u, v) in list(cap.keys()):
        adj[u].add(v)
        adj[v].add(u)
        cap.setdefault((v, u), Fraction(0))
    flow = Fraction(0)
    while True:
        parent = {src: None}
        queue = [src]
        for u in queue:
            if u == snk:
                break
            for v in adj[u]:
                if v not in parent and cap[(u, v)] > 0:
                    parent[v] = u
                    queue.append(v)
        if snk not in parent:
            return flow
        bottleneck = None
        v = snk
        while parent[v] is not None:
            u = parent[v]
            c = cap[(u, v)]
            bottleneck = c if bottleneck is None else min(bottleneck, c)
            v = u
        v = snk
        while parent[v] is not None:
            u = parent[v]
            cap[(u, v)] -= bottleneck
            cap[(v, u)] += bottleneck
            v = u
        flow += bottleneck


def lp_distance_exact(d1: LocalDist, d2: LocalDist) -> Fraction:
    """Exact Levy-Prokhorov distance between finite-support measures.

    Computed as min over candidate thresholds t of max(t, 1 - M(t)), where
    M(t) is the maximum coupling mass restricted to class pairs at rooted
    distance <= t.  Thresholds beyond 1 never help, so candidates are 0 and
    the distinct pairwise distances.
    """
    n1, n2 = len(d1), len(d2)
    dmat = [
        [rooted_distance(d1.reps[i], d2.reps[j]) for j in range(n2)]
        for i in range(n1)
    ]
    thresholds = {Fraction(0)}
    for row in dmat:
        thresholds.update(row)
    best = None
    for t in sorted(thresholds):
        allowed = [
            (i, j) for i in range(n1) for j in range(n2) if dmat[i][j] <= t
        ]
        mass = _max_matching_mass(d1.weights, d2.weights, allowed)
        cand = max(t, 1 - mass)
        if best is None or cand < best:
            best = cand
    return best


def lp_distance(d1: LocalDist, d2: LocalDist) -> float:
    return float(lp_distance_exact(d1, d2))


def point_mass(rep: RootedGraph, depth: int) -> LocalDist:
    cls = canonical_class(rep, depth)
    return LocalDist(depth, [cls], [Fraction(1)], [rep])
