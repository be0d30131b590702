"""Universal encoder for the low-degree regime.

The input graph is trimmed to its degree-bounded core, the core is described
by the frequencies of depth-h rooted neighborhood types, and the graph is
pinned down either by its index inside the set of all graphs sharing those
frequencies (exact mode) or by an edge-set rank over all graphs with the same
edge count (surrogate mode).  Edges touching high-degree vertices travel
separately as a subset of pairs inside the affected vertex set.
"""

import math
from bisect import bisect_left
from dataclasses import dataclass
from itertools import combinations

from .bitcode import (
    BitReader,
    CodeStream,
    read_subset,
    triangle_cells_to_pairs,
    write_subset,
)
from .errors import BudgetExceededError, MalformedStreamError, SgcError
from .graph import Graph
from .intmath import log_comb
from .rooted import RootedGraph, canonical_class, neighborhood_class, rooted_ball

MAGIC = b"SGC1"
VERSION = 1
FLAG_EXACT_MODE = 0x01
FLAG_HEAVY_PART = 0x02

# exact-mode enumeration gives up after this many search-tree nodes
ENUM_NODE_BUDGET = 10**7
# and refuses outright on cell spaces too deep to walk
ENUM_MAX_CELLS = 10**5
# auto mode only attempts exact enumeration where it has a chance of
# finishing: trivial (edgeless) tables, or tiny vertex counts, and even then
# under a much smaller trial budget so a doomed attempt stays cheap
_AUTO_EXACT_MAX_N = 12
_AUTO_TRIAL_BUDGET = 5 * 10**4
# the fixed type codebook is enumerable only for shallow tables
_TABLE_EXACT_MAX_DEGREE = 3


def lwc_params(n: int):
    """Depth and degree bound used by the low-degree encoder at size n.

    The degree bound is log log n, clamped to 0 while it is below 1 (below
    that no integer degree passes anyway); depth is the integer part of its
    square root, floored at 1.
    """
    if n < 1:
        raise SgcError("need n >= 1")
    ll = math.log(math.log(n)) if n >= 2 else 0.0
    D = ll if ll >= 1.0 else 0.0
    h = max(1, int(math.sqrt(ll))) if ll > 0 else 1
    return h, D


@dataclass
class TypeTable:
    """Frequencies of depth-h rooted neighborhood types of the trimmed graph."""

    depth: int
    degree_bound: float
    entries: list  # [(RootedClass, RootedGraph rep, count)], sorted by canon
    mode: str  # "exact-an" | "sparse"

    @property
    def n(self) -> int:
        return sum(c for (_, _, c) in self.entries)

    def edge_count(self) -> int:
        total = sum(rep.root_degree() * c for (_, rep, c) in self.entries)
        if total % 2:
            raise SgcError("type table has odd total degree")
        return total // 2


def _table_mode(h: int, dfloor: int) -> str:
    return "exact-an" if h == 1 and dfloor <= _TABLE_EXACT_MAX_DEGREE else "sparse"


def build_type_table(g: Graph, h: int, D: float) -> TypeTable:
    """Type table of a graph whose degrees are all <= D."""
    buckets = {}
    for v in range(g.n):
        ball = rooted_ball(g, v, h)
        cls = canonical_class(ball, depth=h)
        entry = buckets.get(cls.canon)
        if entry is None:
            buckets[cls.canon] = [cls, ball, 1]
        else:
            entry[2] += 1
    entries = [tuple(e) for _, e in sorted(buckets.items())]
    return TypeTable(h, D, entries, _table_mode(h, int(D)))


def enumerate_a1(dfloor: int):
    """All rooted classes of depth <= 1 with every degree <= dfloor, sorted.

    Each class is a root joined to k <= dfloor neighbors plus internal edges
    among neighbors keeping neighbor degrees <= dfloor.
    """
    out = {}
    for k in range(dfloor + 1):
        pairs = list(combinations(range(1, k + 1), 2))
        for mask in range(1 << len(pairs)):
            deg = [0] * (k + 1)
            edges = [(0, i) for i in range(1, k + 1)]
            for v in range(1, k + 1):
                deg[v] = 1
            ok = True
            for idx, (a, b) in enumerate(pairs):
                if mask >> idx & 1:
                    edges.append((a, b))
                    deg[a] += 1
                    deg[b] += 1
                    if deg[a] > dfloor or deg[b] > dfloor:
                        ok = False
                        break
            if not ok:
                continue
            adj = [[] for _ in range(k + 1)]
            for a, b in edges:
                adj[a].append(b)
                adj[b].append(a)
            rep = RootedGraph(tuple(tuple(sorted(x)) for x in adj), 0)
            cls = canonical_class(rep, depth=1)
            out.setdefault(cls.canon, (cls, rep))
    return [out[k] for k in sorted(out)]


# ---------------------------------------------------------------------------
# exact typical-set enumeration


def _cells_rowmajor(n: int):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


class TypicalEnsemble:
    """All graphs on [n] with degrees <= the table bound whose depth-h type
    counts match the table, in colex order of the upper-triangle adjacency
    bitstring (cell (0,1) least significant)."""

    def __init__(self, n: int, table: TypeTable, node_budget: int = ENUM_NODE_BUDGET):
        self.n = n
        self.table = table
        self.nodes_used = 0
        self._keys = self._enumerate(node_budget)

    @property
    def count(self) -> int:
        return len(self._keys)

    def rank_of(self, g: Graph) -> int:
        key = _graph_key(g)
        i = bisect_left(self._keys, key)
        if i == len(self._keys) or self._keys[i] != key:
            raise SgcError("graph does not match the type table")
        return i

    def graph_of_rank(self, r: int) -> Graph:
        return _graph_from_key(self._keys[r], self.n)

    def _enumerate(self, node_budget: int):
        n = self.n
        h = self.table.depth
        dfloor = int(self.table.degree_bound)
        m_target = self.table.edge_count()
        target = {cls.canon: c for (cls, _, c) in self.table.entries}
        hist_target = {}
        for cls, rep, c in self.table.entries:
            d = rep.root_degree()
            hist_target[d] = hist_target.get(d, 0) + c

        cells = _cells_rowmajor(n)
        if len(cells) > ENUM_MAX_CELLS:
            raise BudgetExceededError(
                f"enumeration space has {len(cells)} cells, cap is {ENUM_MAX_CELLS}"
            )
        order = list(range(len(cells) - 1, -1, -1))  # colex: high cell first
        n_steps = len(order)

        # vertices whose degree becomes final once cells order[0..s] are set
        last_step = {}
        for step, ci in enumerate(order):
            i, j = cells[ci]
            last_step[i] = step
            last_step[j] = step
        final_at = [[] for _ in range(max(n_steps, 1))]
        for v, s in last_step.items():
            final_at[s].append(v)

        adj = [set() for _ in range(n)]
        deg = [0] * n
        hist_used = {}
        keys = []
        nodes = 0

        def profile_matches():
            seen = {}
            g = Graph(n, [(i, j) for i in range(n) for j in adj[i] if j > i])
            for v in range(n):
                c = neighborhood_class(g, v, h)
                seen[c.canon] = seen.get(c.canon, 0) + 1
            return seen == target

        def degrees_match():
            hist = {}
            for v in range(n):
                hist[deg[v]] = hist.get(deg[v], 0) + 1
            return hist == hist_target

        # frame: [step, edges, key, state, marks]; state 0 = fresh,
        # 1 = zero branch issued, 2 = one branch issued (no edge placed),
        # 3 = one branch issued with an edge to unwind
        stack = [[0, 0, 0, 0, 0]]
        while stack:
            frame = stack[-1]
            step, edges, key, state, marks = frame

            if state == 0:
                nodes += 1
                if nodes > node_budget:
                    raise BudgetExceededError(
                        f"typical-set enumeration passed {node_budget} nodes"
                    )
                # vertices finalized by the parent's decision must fit the
                # degree histogram the table implies
                feasible = True
                if step > 0:
                    for v in final_at[step - 1]:
                        d = deg[v]
                        if hist_used.get(d, 0) + 1 > hist_target.get(d, 0):
                            feasible = False
                            break
                        hist_used[d] = hist_used.get(d, 0) + 1
                        frame[4] += 1
                if not feasible:
                    state = 2  # nothing issued; fall through to pop
                elif edges == m_target:
                    # remaining cells are forced zero: single candidate leaf
                    if degrees_match() and profile_matches():
                        keys.append(key)
                    state = 2
                elif step == n_steps:
                    state = 2
                else:
                    frame[3] = 1
                    if edges + (n_steps - step - 1) >= m_target:
                        stack.append([step + 1, edges, key, 0, 0])
                    continue
                frame[3] = state

            if frame[3] == 1:
                frame[3] = 2
                ci = order[step]
                i, j = cells[ci]
                if deg[i] < dfloor and deg[j] < dfloor and edges < m_target:
                    adj[i].add(j)
                    adj[j].add(i)
                    deg[i] += 1
                    deg[j] += 1
                    frame[3] = 3
                    stack.append([step + 1, edges + 1, key | (1 << ci), 0, 0])
                continue

            # done: unwind this frame
            if frame[3] == 3:
                ci = order[step]
                i, j = cells[ci]
                adj[i].discard(j)
                adj[j].discard(i)
                deg[i] -= 1
                deg[j] -= 1
            if frame[4]:
                for v in final_at[step - 1][: frame[4]]:
                    hist_used[deg[v]] -= 1
            stack.pop()
        self.nodes_used = nodes
        return keys


def _graph_key(g: Graph) -> int:
    key = 0
    idx = 0
    for i in range(g.n):
        for j in range(i + 1, g.n):
            if g.has_edge(i, j):
                key |= 1 << idx
            idx += 1
    return key


def _graph_from_key(key: int, n: int) -> Graph:
    edges = []
    idx = 0
    for i in range(n):
        for j in range(i + 1, n):
            if key >> idx & 1:
                edges.append((i, j))
            idx += 1
    return Graph(n, edges)


_ENSEMBLE_CACHE: dict = {}
_ENSEMBLE_CACHE_MAX = 64


def enumerate_typical(n: int, table: TypeTable, node_budget: int = ENUM_NODE_BUDGET):
    key = (
        n,
        table.depth,
        int(table.degree_bound),
        tuple((cls.canon, c) for (cls, _, c) in table.entries),
    )
    hit = _ENSEMBLE_CACHE.get(key)
    if hit is not None:
        # budget semantics stay deterministic regardless of cache warmth
        if hit.nodes_used > node_budget:
            raise BudgetExceededError(
                f"typical-set enumeration needs {hit.nodes_used} nodes, "
                f"budget is {node_budget}"
            )
        return hit
    ens = TypicalEnsemble(n, table, node_budget)
    if len(_ENSEMBLE_CACHE) >= _ENSEMBLE_CACHE_MAX:
        _ENSEMBLE_CACHE.pop(next(iter(_ENSEMBLE_CACHE)))
    _ENSEMBLE_CACHE[key] = ens
    return ens


def lemma210_budget(n: int, m: int) -> float:
    """Reference codeword budget for a degree-bounded graph: log C(C(n,2), m)
    nats, exact big-integer binomial."""
    cells = n * (n - 1) // 2
    if m > cells:
        raise SgcError(f"m={m} exceeds C({n},2)={cells}")
    return log_comb(cells, m)


# ---------------------------------------------------------------------------
# body encode/decode (shared between the standalone and dual containers)


@dataclass
class LwcEncoding:
    data: bytes  # standalone container bytes (empty when embedded)
    n: int
    h: int
    degree_bound: float
    mode_used: str  # "exact" | "surrogate"
    table: TypeTable
    m_tilde: int
    y_set: tuple
    sections: list  # [(label, bits)]
    nats: float


def _trim(g: Graph, D: float):
    deg = [g.degree(v) for v in range(g.n)]
    y = set()
    tilde_edges = []
    z_edges = []
    for u, v in g.edges():
        if deg[u] > D or deg[v] > D:
            z_edges.append((u, v))
        else:
            tilde_edges.append((u, v))
    for v in range(g.n):
        if deg[v] > D or any(deg[w] > D for w in g.adj[v]):
            y.add(v)
    return Graph(g.n, tilde_edges), z_edges, tuple(sorted(y))


def _write_table(s: CodeStream, n: int, table: TypeTable):
    s.begin_section("lwc/table")
    if table.mode == "exact-an":
        codebook = enumerate_a1(int(table.degree_bound))
        counts = {cls.canon: c for (cls, _, c) in table.entries}
        for cls, _rep in codebook:
            s.write_uint(counts.get(cls.canon, 0), n)
    else:
        s.write_uint(len(table.entries), n)
        for cls, rep, count in table.entries:
            k = rep.k
            s.write_uint(k, n)
            bits = 0
            nb = [set(a) for a in rep.adj]
            # canonical serialization: rep is already canonically labeled
            for i in range(k):
                for j in range(i + 1, k):
                    bits = (bits << 1) | (1 if j in nb[i] else 0)
            s.write_bits(bits, k * (k - 1) // 2)
            s.write_uint(count, n)


def _read_table(r: BitReader, n: int, h: int, D: float) -> TypeTable:
    mode = _table_mode(h, int(D))
    entries = []
    if mode == "exact-an":
        codebook = enumerate_a1(int(D))
        for cls, rep in codebook:
            c = r.read_uint(n)
            if c:
                entries.append((cls, rep, c))
    else:
        k_classes = r.read_uint(n)
        for _ in range(k_classes):
            k = r.read_uint(n)
            if k < 1:
                raise MalformedStreamError("empty class in type table", r.byte_offset)
            nbits = k * (k - 1) // 2
            bits = r.read_bits(nbits)
            adj = [[] for _ in range(k)]
            idx = nbits - 1
            for i in range(k):
                for j in range(i + 1, k):
                    if bits >> idx & 1:
                        adj[i].append(j)
                        adj[j].append(i)
                    idx -= 1
            rep = RootedGraph(tuple(tuple(sorted(a)) for a in adj), 0)
            cls = canonical_class(rep, depth=h)
            count = r.read_uint(n)
            entries.append((cls, rep, count))
    entries.sort(key=lambda e: e[0].canon)
    table = TypeTable(h, D, entries, mode)
    if table.n != n:
        raise MalformedStreamError(
            f"type counts sum to {table.n}, expected {n}", r.byte_offset
        )
    return table


def _edge_cell_indices(g: Graph) -> list:
    n = g.n
    out = [
        u * (2 * n - u - 1) // 2 + (v - u - 1) for u, v in g.edges()
    ]
    out.sort()
    return out


def _edges_from_cells(cells, n: int):
    return triangle_cells_to_pairs(cells, n)


def encode_body(s: CodeStream, g: Graph, h: int, D: float, mode: str = "auto"):
    """Write the low-degree body sections; returns (mode_used, info dict)."""
    if mode not in ("auto", "exact", "surrogate"):
        raise SgcError(f"unknown mode {mode!r}")
    n = g.n
    tilde, z_edges, y = _trim(g, D)
    table = build_type_table(tilde, h, D)
    m_tilde = tilde.m

    ens = None
    mode_used = mode
    if mode == "auto" and not (m_tilde == 0 or n <= _AUTO_EXACT_MAX_N):
        # enumeration has no realistic chance; skip the doomed attempt
        mode_used = "surrogate"
    elif mode in ("auto", "exact"):
        budget = _AUTO_TRIAL_BUDGET if mode == "auto" else ENUM_NODE_BUDGET
        try:
            ens = enumerate_typical(n, table, node_budget=budget)
            mode_used = "exact"
        except BudgetExceededError:
            if mode == "exact":
                raise
            mode_used = "surrogate"

    _write_table(s, n, table)

    s.begin_section("lwc/index")
    if mode_used == "exact":
        rank = ens.rank_of(tilde)
        width = (ens.count - 1).bit_length() if ens.count > 1 else 0
        s.write_bits(rank, width)
    else:
        cells = n * (n - 1) // 2
        write_subset(s, _edge_cell_indices(tilde), cells, m_tilde)

    s.begin_section("lwc/y_len")
    s.write_uint(len(y), n)
    s.begin_section("lwc/y_rank")
    write_subset(s, list(y), n, len(y))

    y_index = {v: i for i, v in enumerate(y)}
    ny = len(y)
    y_cells = ny * (ny - 1) // 2
    z_cell_ids = []
    for a, b in z_edges:
        u, v = sorted((y_index[a], y_index[b]))
        z_cell_ids.append(u * (2 * ny - u - 1) // 2 + (v - u - 1))
    z_cell_ids.sort()
    s.begin_section("lwc/z_len")
    s.write_uint(len(z_edges), y_cells)
    s.begin_section("lwc/z_rank")
    write_subset(s, z_cell_ids, y_cells, len(z_edges))

    info = {
        "table": table,
        "m_tilde": m_tilde,
        "y_set": y,
        "z_count": len(z_edges),
        "mode_used": mode_used,
    }
    return mode_used, info


def decode_body(r: BitReader, n: int, h: int, D: float, mode_used: str) -> Graph:
    table = _read_table(r, n, h, D)
    m_tilde = table.edge_count()

    if mode_used == "exact":
        ens = enumerate_typical(n, table)
        width = (ens.count - 1).bit_length() if ens.count > 1 else 0
        rank = r.read_bits(width)
        if rank >= ens.count:
            raise MalformedStreamError(
                f"typical index {rank} out of range", r.byte_offset
            )
        tilde = ens.graph_of_rank(rank)
    else:
        cells = n * (n - 1) // 2
        cell_ids = read_subset(r, cells, m_tilde)
        tilde = Graph(n, _edges_from_cells(cell_ids, n))

    y_len = r.read_uint(n)
    y = read_subset(r, n, y_len)
    y_cells = y_len * (y_len - 1) // 2
    z_count = r.read_uint(y_cells)
    z_cell_ids = read_subset(r, y_cells, z_count)
    z_edges = []
    for c in _edges_from_cells(z_cell_ids, y_len):
        z_edges.append((y[c[0]], y[c[1]]))
    return Graph(n, tilde.edges() + z_edges)


# ---------------------------------------------------------------------------
# standalone container


def lwc_encode(g: Graph, mode: str = "auto", params=None) -> LwcEncoding:
    """Encode a graph with the low-degree scheme into a standalone container.

    params overrides (h, degree_bound) for testing; the decoder must be given
    the same override.
    """
    h, D = params if params is not None else lwc_params(max(g.n, 1))
    s = CodeStream()
    mode_used, info = encode_body(s, g, h, D, mode)
    flags = FLAG_EXACT_MODE if mode_used == "exact" else 0
    header = MAGIC + bytes([VERSION, flags]) + g.n.to_bytes(4, "big")
    data = header + s.to_bytes()
    return LwcEncoding(
        data=data,
        n=g.n,
        h=h,
        degree_bound=D,
        mode_used=mode_used,
        table=info["table"],
        m_tilde=info["m_tilde"],
        y_set=info["y_set"],
        sections=[tuple(x) for x in s.sections],
        nats=s.nats,
    )


def lwc_decode(data: bytes, params=None) -> Graph:
    if len(data) < 10:
        raise MalformedStreamError("container shorter than header", len(data))
    if data[:4] != MAGIC:
        raise MalformedStreamError("bad container magic", 0)
    if data[4] != VERSION:
        raise MalformedStreamError(f"unsupported container version {data[4]}", 4)
    flags = data[5]
    if flags & FLAG_HEAVY_PART:
        raise MalformedStreamError("dual container passed to lwc decoder", 5)
    n = int.from_bytes(data[6:10], "big")
    h, D = params if params is not None else lwc_params(max(n, 1))
    mode_used = "exact" if flags & FLAG_EXACT_MODE else "surrogate"
    r = BitReader(data, bit_offset=80)
    try:
        return decode_body(r, n, h, D, mode_used)
    except MalformedStreamError:
        raise
    except SgcError as e:
        raise MalformedStreamError(str(e), r.byte_offset) from e
