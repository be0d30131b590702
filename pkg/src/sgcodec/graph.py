"""Simple undirected graphs on [n], density/degree queries, and the
degree-threshold split that separates the light and heavy edge sets."""

from dataclasses import dataclass

from .errors import SgcError


class Graph:
    """Immutable simple graph on vertex set {0, ..., n-1}.

    Stored as sorted per-vertex neighbor tuples plus the edge count.
    No self loops, no multi-edges; adjacency is symmetric.
    """

    __slots__ = ("n", "adj", "m")

    def __init__(self, n: int, edges=()):
        if n < 0:
            raise SgcError("vertex count must be nonnegative")
        nbrs = [[] for _ in range(n)]
        seen = set()
        for u, v in edges:
            if u == v:
                raise SgcError(f"self loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise SgcError(f"edge ({u},{v}) out of range for n={n}")
            if u > v:
                u, v = v, u
            if (u, v) in seen:
                raise SgcError(f"duplicate edge ({u},{v})")
            seen.add((u, v))
            nbrs[u].append(v)
            nbrs[v].append(u)
        self.n = n
        self.adj = tuple(tuple(sorted(a)) for a in nbrs)
        self.m = len(seen)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edges(self):
        """Edges as sorted (u, v) pairs with u < v, lexicographic order."""
        out = []
        for u in range(self.n):
            for v in self.adj[u]:
                if v > u:
                    out.append((u, v))
        return out

    def has_edge(self, u: int, v: int) -> bool:
        a = self.adj[u]
        lo, hi = 0, len(a)
        while lo < hi:
            mid = (lo + hi) // 2
            if a[mid] < v:
                lo = mid + 1
            else:
                hi = mid
        return lo < len(a) and a[lo] == v

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.adj == other.adj
        )

    def __hash__(self):
        return hash((self.n, self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class SplitResult:
    """Outcome of the degree-threshold split: light/heavy edge parts,
    the heavy vertex set, the threshold, and the heavy-set fraction."""

    light: Graph
    heavy: Graph
    heavy_set: tuple
    delta: float
    eta: float


def density(g: Graph) -> float:
    """Density of ones in the adjacency matrix, 2m/n^2 (0 for n=0)."""
    if g.n == 0:
        return 0.0
    return 2.0 * g.m / (g.n * g.n)


def matrix_lp_norm(g: Graph, p: float) -> float:
    """Normalized matrix L^p norm ((1/n^2) sum |A_ij|^p)^(1/p); p >= 1."""
    if p < 1:
        raise SgcError(f"L^p norm needs p >= 1, got {p}")
    if g.n == 0:
        return 0.0
    # entries are 0/1 so |A_ij|^p just counts the ones
    return (2.0 * g.m / (g.n * g.n)) ** (1.0 / p)


def split(g: Graph, delta: float) -> SplitResult:
    """Split edges at degree threshold delta.

    An edge goes to the light part iff both endpoint degrees (in the source
    graph) are <= delta, otherwise to the heavy part.  The heavy set collects
    every vertex that exceeds the threshold or touches one that does.
    """
    if delta < 0:
        raise SgcError("delta must be nonnegative")
    deg = [g.degree(v) for v in range(g.n)]
    light_edges = []
    heavy_edges = []
    heavy_set = set()
    for v in range(g.n):
        v_over = deg[v] > delta
        for w in g.adj[v]:
            w_over = deg[w] > delta
            if v_over or w_over:
                heavy_set.add(v)
            if w > v:
                if v_over or w_over:
                    heavy_edges.append((v, w))
                else:
                    light_edges.append((v, w))
    light = Graph(g.n, light_edges)
    heavy = Graph(g.n, heavy_edges)
    eta = len(heavy_set) / g.n if g.n > 0 else 0.0
    return SplitResult(light, heavy, tuple(sorted(heavy_set)), float(delta), eta)


def degree_histogram(g: Graph) -> dict:
    """Map degree -> number of vertices with that degree."""
    hist: dict[int, int] = {}
    for v in range(g.n):
        d = g.degree(v)
        hist[d] = hist.get(d, 0) + 1
    return hist


def union(a: Graph, b: Graph) -> Graph:
    """Edge union of two graphs on the same vertex set (disjoint edge sets)."""
    if a.n != b.n:
        raise SgcError("union needs equal vertex counts")
    return Graph(a.n, list(a.edges()) + list(b.edges()))


def write_edgelist(g: Graph, path) -> None:
    """Write the text edge-list format: 'n m' then one 'u v' line per edge."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(f"{g.n} {g.m}\n")
        for u, v in g.edges():
            f.write(f"{u} {v}\n")


def read_edgelist(path) -> Graph:
    """Parse the text edge-list format written by write_edgelist."""
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().split()
        if len(header) != 2:
            raise SgcError(f"bad edge-list header in {path}")
        n, m = int(header[0]), int(header[1])
        edges = []
        for line in f:
            line = line.strip()
            if not line:
                continue
            u, v = line.split()
            edges.append((int(u), int(v)))
    if len(edges) != m:
        raise SgcError(f"edge-list {path} declares m={m} but has {len(edges)} edges")
    return Graph(n, edges)
