"""Hot inner loops over truth tables.

Every kernel has a pure-numpy implementation and, when numba is importable,
an ``@njit`` twin.  The public names at the bottom dispatch to one of them.
Set ``HOTKIT_NUMBA=0`` in the environment to force the numpy path; the
benchmark in ``benchmarks/bench_kernels.py`` calls both explicitly.

Batched kernels work on packed tables in ``uint64`` words, one function per
word, so they cover n <= 6.
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("HOTKIT_NUMBA", "1").strip().lower()
NUMBA_REQUESTED = _FLAG not in ("0", "false", "no", "off")

try:
    from numba import njit
    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is optional
    NUMBA_AVAILABLE = False

USE_NUMBA = NUMBA_REQUESTED and NUMBA_AVAILABLE

MAX_PACKED_N = 6


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# Moebius transform on the subset lattice
#
# Coordinates are indexed by bit masks.  Per variable i the 2x2 step maps
# (value at s_i=0, value at s_i=1) to (coef without i, coef with i) as
#   coef[T without i] = v1,   coef[T with i] = v0 - v1
# which realises f = sum_T c_T prod_{i in T} (1 - s_i).
# ---------------------------------------------------------------------------

def mobius_forward_numpy(values: np.ndarray, n: int) -> np.ndarray:
    a = np.array(values, dtype=np.int64).reshape((2,) * n)
    # reshape puts bit n-1 on axis 0
    for axis in range(n):
        v0 = np.take(a, 0, axis=axis)
        v1 = np.take(a, 1, axis=axis)
        a = np.stack([v1, v0 - v1], axis=axis)
    return a.reshape(-1)


def mobius_inverse_numpy(coeffs: np.ndarray, n: int) -> np.ndarray:
    a = np.array(coeffs, dtype=np.int64).reshape((2,) * n)
    for axis in range(n):
        c0 = np.take(a, 0, axis=axis)
        c1 = np.take(a, 1, axis=axis)
        a = np.stack([c0 + c1, c0], axis=axis)
    return a.reshape(-1)


def _mobius_forward_loop(values, n):
    a = values.astype(np.int64).copy()
    size = 1 << n
    for i in range(n):
        step = 1 << i
        for x in range(size):
            if x & step == 0:
                v0 = a[x]
                v1 = a[x | step]
                a[x] = v1
                a[x | step] = v0 - v1
    return a


def _mobius_inverse_loop(coeffs, n):
    a = coeffs.astype(np.int64).copy()
    size = 1 << n
    for i in range(n):
        step = 1 << i
        for x in range(size):
            if x & step == 0:
                c0 = a[x]
                c1 = a[x | step]
                a[x] = c0 + c1
                a[x | step] = c0
    return a


# ---------------------------------------------------------------------------
# Batched permutation of packed tables: out bit s = in bit src[s]
# ---------------------------------------------------------------------------

def _unpack(tables: np.ndarray, size: int) -> np.ndarray:
    shifts = np.arange(size, dtype=np.uint64)
    return (tables[:, None] >> shifts[None, :]) & np.uint64(1)


def _pack(bits: np.ndarray) -> np.ndarray:
    shifts = np.arange(bits.shape[1], dtype=np.uint64)
    return np.bitwise_or.reduce(bits << shifts[None, :], axis=1)


def permute_tables_numpy(tables: np.ndarray, src: np.ndarray) -> np.ndarray:
    tables = np.asarray(tables, dtype=np.uint64)
    if tables.size == 0:
        return tables.copy()
    bits = _unpack(tables, len(src))
    return _pack(bits[:, src])


def _permute_tables_loop(tables, src):
    out = np.zeros(tables.shape[0], dtype=np.uint64)
    one = np.uint64(1)
    for k in range(tables.shape[0]):
        t = tables[k]
        acc = np.uint64(0)
        for s in range(src.shape[0]):
            if (t >> np.uint64(src[s])) & one:
                acc |= one << np.uint64(s)
        out[k] = acc
    return out


# ---------------------------------------------------------------------------
# Order-respecting test: f(lo[k]) <= f(hi[k]) for every pair k
# ---------------------------------------------------------------------------

def respects_pairs_numpy(tables: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    tables = np.asarray(tables, dtype=np.uint64)
    if len(lo) == 0:
        return np.ones(tables.shape[0], dtype=np.bool_)
    a = (tables[:, None] >> lo.astype(np.uint64)[None, :]) & np.uint64(1)
    b = (tables[:, None] >> hi.astype(np.uint64)[None, :]) & np.uint64(1)
    return np.all(a <= b, axis=1)


def _respects_pairs_loop(tables, lo, hi):
    out = np.ones(tables.shape[0], dtype=np.bool_)
    one = np.uint64(1)
    for k in range(tables.shape[0]):
        t = tables[k]
        for p in range(lo.shape[0]):
            if (t >> np.uint64(lo[p])) & one and not ((t >> np.uint64(hi[p])) & one):
                out[k] = False
                break
    return out


# ---------------------------------------------------------------------------
# Interval expansion: base | deposit(c, positions) for c in [start, start+count)
# ---------------------------------------------------------------------------

def expand_free_bits_numpy(base: int, positions: np.ndarray, start: int, count: int) -> np.ndarray:
    c = np.arange(start, start + count, dtype=np.uint64)
    out = np.full(count, np.uint64(base), dtype=np.uint64)
    for j, pos in enumerate(positions):
        out |= ((c >> np.uint64(j)) & np.uint64(1)) << np.uint64(pos)
    return out


def _expand_free_bits_loop(base, positions, start, count):
    out = np.empty(count, dtype=np.uint64)
    one = np.uint64(1)
    for k in range(count):
        c = np.uint64(start + k)
        t = np.uint64(base)
        for j in range(positions.shape[0]):
            if (c >> np.uint64(j)) & one:
                t |= one << np.uint64(positions[j])
        out[k] = t
    return out


if NUMBA_AVAILABLE:
    mobius_forward_numba = njit(cache=False)(_mobius_forward_loop)
    mobius_inverse_numba = njit(cache=False)(_mobius_inverse_loop)
    _permute_tables_nb = njit(cache=False)(_permute_tables_loop)
    _respects_pairs_nb = njit(cache=False)(_respects_pairs_loop)
    _expand_free_bits_nb = njit(cache=False)(_expand_free_bits_loop)

    def permute_tables_numba(tables, src):
        return _permute_tables_nb(np.ascontiguousarray(tables, dtype=np.uint64),
                                  np.ascontiguousarray(src, dtype=np.int64))

    def respects_pairs_numba(tables, lo, hi):
        return _respects_pairs_nb(np.ascontiguousarray(tables, dtype=np.uint64),
                                  np.ascontiguousarray(lo, dtype=np.int64),
                                  np.ascontiguousarray(hi, dtype=np.int64))

    def expand_free_bits_numba(base, positions, start, count):
        return _expand_free_bits_nb(np.uint64(base),
                                    np.ascontiguousarray(positions, dtype=np.int64),
                                    int(start), int(count))
else:  # pragma: no cover
    mobius_forward_numba = None
    mobius_inverse_numba = None
    permute_tables_numba = None
    respects_pairs_numba = None
    expand_free_bits_numba = None


def mobius_forward(values: np.ndarray, n: int) -> np.ndarray:
    if USE_NUMBA:
        return mobius_forward_numba(np.ascontiguousarray(values, dtype=np.int64), n)
    return mobius_forward_numpy(values, n)


def mobius_inverse(coeffs: np.ndarray, n: int) -> np.ndarray:
    if USE_NUMBA:
        return mobius_inverse_numba(np.ascontiguousarray(coeffs, dtype=np.int64), n)
    return mobius_inverse_numpy(coeffs, n)


def permute_tables(tables: np.ndarray, src: np.ndarray) -> np.ndarray:
    if USE_NUMBA:
        return permute_tables_numba(tables, src)
    return permute_tables_numpy(tables, src)


def respects_pairs(tables: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    if USE_NUMBA:
        return respects_pairs_numba(tables, lo, hi)
    return respects_pairs_numpy(tables, lo, hi)


def expand_free_bits(base: int, positions: np.ndarray, start: int, count: int) -> np.ndarray:
    if USE_NUMBA:
        return expand_free_bits_numba(base, positions, start, count)
    return expand_free_bits_numpy(base, np.asarray(positions), start, count)
