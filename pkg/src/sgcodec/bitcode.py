"""Prefix-free bit container with per-section accounting, fixed-width integer
fields, and exact combinadic (rank/unrank) coding of m-subsets.

Subset coding conventions, fixed by the container version byte:

* ``rank_subset``/``unrank_subset`` implement the colexicographic
  combinatorial number system, rank = sum_i C(e_i, i).
* ``write_subset`` emits the colex rank for subsets with at most
  ``COLEX_MAX_M`` elements.  Larger blocks use a balanced-split rank (halve
  the cell universe, code the left/right split sizes by a zigzag walk around
  the hypergeometric mode, recurse): the same bijection onto
  [0, C(N, m)) and the same field width, but near-linear total bit-work
  where per-element colex would be quadratic.

All widths are ceil(log2(count)) bits, derivable by the decoder from
previously decoded values.
"""

import math
from bisect import bisect_left, bisect_right

from gmpy2 import mpz
import numpy as np

from .errors import CapacityError, MalformedStreamError, SgcError
from .intmath import (
    comb,
    log2_big,
    log2_choose_estimate,
    subset_width,
    uint_width,
)

LN2 = math.log(2.0)

# write_subset switches from per-element colex to the balanced-split rank
# above this subset size
COLEX_MAX_M = 1024
# balanced-split recursion bottoms out on small universes / small subsets
_SPLIT_LEAF_M = 48
_SPLIT_LEAF_N = 512
# desk-scale cap on block sizes (bits of the rank field)
WIDTH_CAP_BITS = 2 * 10**7


class CodeStream:
    """Append-only big-endian bit buffer with named section accounting."""

    def __init__(self):
        self._chunks = []  # (value:int, width:int)
        self._bits = 0
        self.sections = []  # [label, bits] in write order
        self._current = None

    def begin_section(self, label: str):
        self._current = [label, 0]
        self.sections.append(self._current)

    def write_bits(self, value: int, width: int):
        value = int(value)
        if width < 0:
            raise SgcError("negative width")
        if value < 0 or (value >> width) != 0:
            raise SgcError(f"value {value} does not fit in {width} bits")
        if width == 0:
            return
        self._chunks.append((value, width))
        self._bits += width
        if self._current is None:
            self.begin_section("")
            self.sections.pop()  # anonymous writes still need a bucket
            self.sections.append(self._current)
        self._current[1] += width

    def write_uint(self, value: int, maxval: int):
        """Fixed-width field for a value in [0, maxval]; width is
        ceil(log2(maxval+1)) bits (0 bits when maxval == 0)."""
        if value < 0 or value > maxval:
            raise SgcError(f"value {value} out of range [0, {maxval}]")
        self.write_bits(value, uint_width(maxval))

    def extend(self, other: "CodeStream"):
        """Append another stream's bits and section accounting."""
        self._chunks.extend(other._chunks)
        self._bits += other._bits
        self.sections.extend([label, bits] for label, bits in other.sections)
        self._current = None

    @property
    def bit_length(self) -> int:
        return self._bits

    @property
    def nats(self) -> float:
        return self._bits * LN2

    def section_bits(self, label: str) -> int:
        return sum(b for (lab, b) in self.sections if lab == label)

    def to_bytes(self) -> bytes:
        if not self._chunks:
            return b""

        def combine(lo, hi):
            if hi - lo == 1:
                return self._chunks[lo]
            mid = (lo + hi) // 2
            v1, w1 = combine(lo, mid)
            v2, w2 = combine(mid, hi)
            return (v1 << w2) | v2, w1 + w2

        acc, width = combine(0, len(self._chunks))
        pad = (-width) % 8
        return int(acc << pad).to_bytes((width + pad) // 8, "big")


class BitReader:
    """Sequential reader over a byte buffer; mirrors CodeStream widths."""

    def __init__(self, data: bytes, bit_offset: int = 0):
        self._data = data
        self._pos = bit_offset
        self._end = len(data) * 8

    @property
    def byte_offset(self) -> int:
        return self._pos // 8

    @property
    def bits_consumed(self) -> int:
        return self._pos

    def read_bits(self, width: int) -> int:
        if width == 0:
            return 0
        if self._pos + width > self._end:
            raise MalformedStreamError(
                f"stream truncated: needed {width} bits", self.byte_offset
            )
        pos = self._pos
        self._pos = pos + width
        start = pos >> 3
        end = (pos + width + 7) >> 3
        chunk = int.from_bytes(self._data[start:end], "big")
        tail = (end << 3) - (pos + width)
        return (chunk >> tail) & ((1 << width) - 1)

    def read_uint(self, maxval: int) -> int:
        v = self.read_bits(uint_width(maxval))
        if v > maxval:
            raise MalformedStreamError(
                f"field value {v} exceeds max {maxval}", self.byte_offset
            )
        return v


# ---------------------------------------------------------------------------
# colexicographic combinadics


def rank_subset(elements, N: int):
    """Colex rank of a sorted m-subset of {0..N-1}: sum_i C(e_i, i)."""
    prev = -1
    r = mpz(0)
    for i, e in enumerate(elements, start=1):
        if e <= prev:
            raise SgcError("elements must be strictly increasing")
        if e < 0 or e >= N:
            raise SgcError(f"element {e} out of range [0, {N})")
        prev = e
        r += comb(e, i)
    return int(r)


def _find_colex_digit(r, i: int, hi: int):
    """Largest e in [i-1, hi-1] with C(e, i) <= r; returns (e, C(e, i))."""
    from .intmath import _PASCAL_N, pascal_column

    lo = i - 1  # C(i-1, i) = 0 <= r always
    hi = hi - 1
    if hi <= _PASCAL_N:
        col = pascal_column(i)
        e = bisect_right(col, r, lo, hi + 1) - 1
        return e, col[e]
    if r > 0:
        log2r = log2_big(r)
        a, b = lo, hi
        while a < b:
            mid = (a + b + 1) // 2
            if log2_choose_estimate(mid, i) <= log2r:
                a = mid
            else:
                b = mid - 1
        e = a
    else:
        e = lo
    c = comb(e, i)
    while c > r:
        # C(e-1, i) from C(e, i)
        c = c * (e - i) // e
        e -= 1
    while e < hi:
        # C(e+1, i); the ratio form needs e >= i, below that C(i, i) = 1
        c_up = c * (e + 1) // (e + 1 - i) if e >= i else mpz(1)
        if c_up > r:
            break
        c = c_up
        e += 1
    return e, c


def unrank_subset(rank, N: int, m: int):
    """Inverse of rank_subset on m-subsets of {0..N-1}."""
    total = comb(N, m)
    if rank < 0 or rank >= total:
        raise SgcError(f"rank {rank} out of range [0, C({N},{m}))")
    r = mpz(rank)
    out = []
    hi = N
    for i in range(m, 0, -1):
        e, c = _find_colex_digit(r, i, hi)
        out.append(e)
        r -= c
        hi = e
    out.reverse()
    return out


# ---------------------------------------------------------------------------
# balanced-split rank for huge blocks


def _zigzag(k0: int, kmin: int, kmax: int):
    yield k0
    step = 1
    while True:
        up, dn = k0 + step, k0 - step
        alive = False
        if up <= kmax:
            alive = True
            yield up
        if dn >= kmin:
            alive = True
            yield dn
        if not alive:
            return
        step += 1


class _ZigWalk:
    """Lazily evaluates W(j) = C(L, j) * C(R, m-j) along the zigzag order."""

    def __init__(self, N, m, L, R):
        self.L, self.R, self.m = L, R, m
        self.kmin = max(0, m - R)
        self.kmax = min(m, L)
        self.k0 = min(max((m * L) // N, self.kmin), self.kmax)
        w0 = comb(L, self.k0) * comb(R, m - self.k0)
        self._wup = w0  # W at the current top of the upward walk
        self._wdn = w0
        self._jup = self.k0
        self._jdn = self.k0

    def weight(self, j: int):
        L, R, m = self.L, self.R, self.m
        while self._jup < j:
            t = self._jup
            self._wup = self._wup * ((L - t) * (m - t)) // (
                (t + 1) * (R - m + t + 1)
            )
            self._jup += 1
        while self._jdn > j:
            t = self._jdn
            self._wdn = self._wdn * (t * (R - m + t)) // (
                (L - t + 1) * (m - t + 1)
            )
            self._jdn -= 1
        return self._wup if j >= self.k0 else self._wdn


def _split_rank(elements, N: int, m: int):
    if m == 0 or m == N:
        return mpz(0)
    if m <= _SPLIT_LEAF_M or N <= _SPLIT_LEAF_N:
        return mpz(rank_subset(elements, N))
    L = N >> 1
    R = N - L
    k = bisect_left(elements, L)
    walk = _ZigWalk(N, m, L, R)
    prefix = mpz(0)
    for j in _zigzag(walk.k0, walk.kmin, walk.kmax):
        if j == k:
            break
        prefix += walk.weight(j)
    left = _split_rank(elements[:k], L, k)
    right = _split_rank([e - L for e in elements[k:]], R, m - k)
    return prefix + left * comb(R, m - k) + right


def _split_unrank(rank, N: int, m: int):
    if m == 0:
        return []
    if m == N:
        return list(range(N))
    if m <= _SPLIT_LEAF_M or N <= _SPLIT_LEAF_N:
        return unrank_subset(rank, N, m)
    L = N >> 1
    R = N - L
    walk = _ZigWalk(N, m, L, R)
    cum = mpz(0)
    k = None
    for j in _zigzag(walk.k0, walk.kmin, walk.kmax):
        w = walk.weight(j)
        if rank < cum + w:
            k = j
            rank = rank - cum
            break
        cum += w
    if k is None:
        raise SgcError("split unrank: rank out of range")
    left_rank, right_rank = divmod(rank, comb(R, m - k))
    left = _split_unrank(left_rank, L, k)
    right = _split_unrank(right_rank, R, m - k)
    return left + [e + L for e in right]


# ---------------------------------------------------------------------------
# cell-index helpers for upper-triangle pair universes


def triangle_cells_to_pairs(cell_ids, k: int):
    """Map row-major upper-triangle cell indices to (u, v) pairs, u < v."""
    if not cell_ids:
        return []
    cells = np.asarray(cell_ids, dtype=np.int64)
    # row u starts at offset u*(2k-u-1)/2
    us = np.arange(k, dtype=np.int64)
    offsets = us * (2 * k - us - 1) // 2
    u = np.searchsorted(offsets, cells, side="right") - 1
    v = cells - offsets[u] + u + 1
    return list(zip(u.tolist(), v.tolist()))


def pair_to_triangle_cell(u: int, v: int, k: int) -> int:
    return u * (2 * k - u - 1) // 2 + (v - u - 1)


# ---------------------------------------------------------------------------
# stream-facing subset fields


def _check_capacity(N: int, m: int):
    est = log2_choose_estimate(N, m)
    if est > WIDTH_CAP_BITS + 64:
        raise CapacityError(
            f"C({N},{m}) needs ~{est:.0f} bits, beyond the {WIDTH_CAP_BITS}-bit cap"
        )


def write_subset(s: CodeStream, elements, N: int, m: int):
    """Write the rank of an m-subset of {0..N-1} in exactly
    ceil(log2 C(N, m)) bits (m is context the decoder already knows)."""
    elements = list(elements)
    if len(elements) != m:
        raise SgcError(f"expected {m} elements, got {len(elements)}")
    _check_capacity(N, m)
    width = subset_width(N, m)
    if m <= COLEX_MAX_M:
        r = rank_subset(elements, N)
    else:
        # validation normally happens inside rank_subset
        if any(
            e <= p for p, e in zip([-1] + elements, elements + [N])
        ) or elements[-1] >= N:
            raise SgcError("elements must be strictly increasing and < N")
        r = int(_split_rank(elements, N, m))
    s.write_bits(r, width)


def read_subset(reader: BitReader, N: int, m: int):
    """Inverse of write_subset."""
    _check_capacity(N, m)
    width = subset_width(N, m)
    r = reader.read_bits(width)
    if r >= comb(N, m):
        raise MalformedStreamError(
            f"subset rank {r} out of range for C({N},{m})", reader.byte_offset
        )
    if m <= COLEX_MAX_M:
        return unrank_subset(r, N, m)
    return _split_unrank(mpz(r), N, m)
