"""Exact big-integer combinatorics used by every coding path.

All quantities that influence emitted bits are computed with exact integer
arithmetic (gmpy2/GMP); floats appear only as search hints that are verified
exactly afterwards.
"""

import math

import gmpy2
from gmpy2 import mpz

_LN2 = math.log(2.0)

# binomials at codec scale reach megabit sizes; a tiny LRU keeps the
# encode -> budget-check -> decode sequence from recomputing them
_COMB_CACHE: dict[tuple[int, int], "mpz"] = {}
_COMB_CACHE_MAX = 48

_PASCAL_N = 512
_pascal_rows: list = []
_pascal_cols: dict = {}


def _pascal(n: int):
    """Row n of Pascal's triangle, built lazily (n <= _PASCAL_N)."""
    while len(_pascal_rows) <= n:
        if not _pascal_rows:
            _pascal_rows.append((1,))
            continue
        prev = _pascal_rows[-1]
        row = [1]
        for i in range(1, len(prev)):
            row.append(prev[i - 1] + prev[i])
        row.append(1)
        _pascal_rows.append(tuple(row))
    return _pascal_rows[n]


def pascal_column(k: int):
    """(C(e, k) for e in 0.._PASCAL_N), nondecreasing in e; lazy per k."""
    col = _pascal_cols.get(k)
    if col is None:
        _pascal(_PASCAL_N)
        col = tuple(
            _pascal_rows[e][k] if k <= e else 0 for e in range(_PASCAL_N + 1)
        )
        _pascal_cols[k] = col
    return col


def _prod_range(a: int, b: int) -> "mpz":
    """Product of the integers in [a, b), by balanced splitting."""
    if b - a <= 16:
        p = mpz(1)
        for t in range(a, b):
            p *= t
        return p
    mid = (a + b) // 2
    return _prod_range(a, mid) * _prod_range(mid, b)


def comb(n: int, k: int):
    """Exact C(n, k); 0 when k < 0 or k > n."""
    if k < 0 or k > n:
        return mpz(0)
    if n <= _PASCAL_N:
        return _pascal(n)[k]
    k = min(k, n - k)
    if k == 0:
        return mpz(1)
    if k <= 256:
        return gmpy2.bincoef(n, k)
    key = (n, k)
    hit = _COMB_CACHE.get(key)
    if hit is not None:
        return hit
    val = _prod_range(n - k + 1, n + 1) // gmpy2.fac(k)
    if len(_COMB_CACHE) >= _COMB_CACHE_MAX:
        _COMB_CACHE.pop(next(iter(_COMB_CACHE)))
    _COMB_CACHE[key] = val
    return val


def log2_big(x) -> float:
    """float log2 of a positive (possibly huge) integer."""
    x = mpz(x)
    if x <= 0:
        raise ValueError("log2_big needs a positive integer")
    bl = x.bit_length()
    if bl <= 53:
        return math.log2(int(x))
    return (bl - 53) + math.log2(int(x >> (bl - 53)))


def log_big(x) -> float:
    """Natural log of a positive (possibly huge) integer."""
    return log2_big(x) * _LN2


def log_comb(n: int, k: int) -> float:
    """Natural log of C(n, k), exact integer then converted; 0 log of C=1."""
    c = comb(n, k)
    if c == 0:
        raise ValueError(f"C({n},{k}) is zero")
    if c == 1:
        return 0.0
    return log_big(c)


def log2_choose_estimate(n: int, k: int) -> float:
    """Fast float estimate of log2 C(n, k) via lgamma (hint only)."""
    if k < 0 or k > n:
        return float("-inf")
    if k == 0 or k == n:
        return 0.0
    return (
        math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)
    ) / _LN2


def uint_width(maxval: int) -> int:
    """Bits needed for a value in [0, maxval]: ceil(log2(maxval+1))."""
    if maxval < 0:
        raise ValueError("maxval must be nonnegative")
    return int(maxval).bit_length() if maxval > 0 else 0


def subset_width(n_cells: int, m: int) -> int:
    """Bits for a rank in [0, C(n_cells, m)): ceil(log2 C)."""
    c = comb(n_cells, m)
    if c == 0:
        raise ValueError(f"empty rank space C({n_cells},{m})")
    return int(c - 1).bit_length()
