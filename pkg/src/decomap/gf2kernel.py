"""Dense GF(2) row reduction on bit-packed matrices.

Every homology computation in this package bottoms out in Gaussian
elimination over GF(2), so the inner loop is worth making fast: rows are
packed 64 columns per uint64 word and eliminated with whole-word XORs.

Two interchangeable implementations are provided:

* a numba ``@njit`` kernel (default when numba is importable), and
* a vectorized pure-numpy fallback.

Set the environment variable ``DECOMAP_NO_NUMBA=1`` before import to force
the numpy path.  Both produce the identical reduced row-echelon form (RREF
is unique, and both use the same leftmost-column / topmost-row pivot rule),
so results never depend on the backend.  ``benchmarks/bench_gf2.py``
compares the two.
"""

from __future__ import annotations

import os

import numpy as np

_ONE = np.uint64(1)


def _rref_words_py(words, n_pivot_cols):
    """In-place RREF of a bit-packed matrix; returns pivot column indices.

    Pivots are searched left to right over the first *n_pivot_cols* columns
    only (callers append augmentation columns past that bound); row
    operations always apply to the full packed width.
    """
    m, n_words = words.shape
    pivots = np.empty(min(m, n_pivot_cols) if m else 0, dtype=np.int64)
    npiv = 0
    r = 0
    for c in range(n_pivot_cols):
        if r >= m:
            break
        w = c >> 6
        b = np.uint64(c & 63)
        p = -1
        for i in range(r, m):
            if (words[i, w] >> b) & _ONE:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for k in range(n_words):
                t = words[p, k]
                words[p, k] = words[r, k]
                words[r, k] = t
        for i in range(m):
            if i != r and ((words[i, w] >> b) & _ONE):
                for k in range(n_words):
                    words[i, k] ^= words[r, k]
        pivots[npiv] = c
        npiv += 1
        r += 1
    return pivots[:npiv]


def _rref_words_numpy(words, n_pivot_cols):
    """Numpy-vectorized twin of :func:`_rref_words_py` (same pivot rule)."""
    m, _ = words.shape
    pivots = []
    r = 0
    for c in range(n_pivot_cols):
        if r >= m:
            break
        w = c >> 6
        b = np.uint64(c & 63)
        col = (words[r:, w] >> b) & _ONE
        hits = np.nonzero(col)[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            words[[r, p]] = words[[p, r]]
        colall = (words[:, w] >> b) & _ONE
        rows = np.nonzero(colall)[0]
        rows = rows[rows != r]
        if rows.size:
            words[rows] ^= words[r]
        pivots.append(c)
        r += 1
    return np.asarray(pivots, dtype=np.int64)


def _want_numba():
    flag = os.environ.get("DECOMAP_NO_NUMBA", "").strip().lower()
    return flag not in ("1", "true", "yes")


_rref_words_numba = None
if _want_numba():
    try:
        from numba import njit

        _rref_words_numba = njit(cache=True)(_rref_words_py)
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - exercised via env flag instead
        BACKEND = "numpy"
else:
    BACKEND = "numpy"

_rref_words = _rref_words_numba if BACKEND == "numba" else _rref_words_numpy


def pack_rows(a):
    """Pack a uint8 0/1 matrix into uint64 words, 64 columns per word."""
    a = np.ascontiguousarray(a, dtype=np.uint8)
    m, n = a.shape
    n_words = (n + 63) >> 6
    if n == 0 or m == 0:
        return np.zeros((m, n_words), dtype=np.uint64)
    packed = np.packbits(a, axis=1, bitorder="little")
    pad = n_words * 8 - packed.shape[1]
    if pad:
        packed = np.pad(packed, ((0, 0), (0, pad)))
    return packed.view("<u8")


def unpack_rows(words, n_cols):
    """Inverse of :func:`pack_rows`."""
    m = words.shape[0]
    if n_cols == 0 or m == 0:
        return np.zeros((m, n_cols), dtype=np.uint8)
    as_bytes = words.view(np.uint8)
    bits = np.unpackbits(as_bytes, axis=1, count=n_cols, bitorder="little")
    return np.ascontiguousarray(bits)


def gf2_rref(a, n_pivot_cols=None):
    """RREF over GF(2) of a uint8 0/1 matrix.

    Returns ``(reduced, pivot_columns)`` with *reduced* a fresh uint8 array.
    """
    a = np.asarray(a, dtype=np.uint8)
    m, n = a.shape
    if n_pivot_cols is None:
        n_pivot_cols = n
    words = pack_rows(a)
    pivots = _rref_words(words, n_pivot_cols)
    return unpack_rows(words, n), [int(c) for c in pivots]


def gf2_matmul(a, b):
    """Exact product of 0/1 uint8 matrices over GF(2).

    uint8 accumulation wraps mod 256, which preserves parity, so the
    final ``& 1`` is exact.
    """
    if a.shape[1] == 0 or b.shape[1] == 0 or a.shape[0] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.uint8)
    return (a @ b) & np.uint8(1)
