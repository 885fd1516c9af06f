"""Compiled enumeration kernels.

Both kernels partition work into fixed chunk sets and accumulate one integer
histogram row per chunk; merging is plain addition, so results are identical
for any thread count. Rows are int64 bitsets; rank uses the same
lowest-set-bit elimination as the reference implementation in gf2.py.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

# int64 bitset arithmetic and (1 << bits) stay safe well below this.
MAX_SPACE_BITS = 48


@njit(cache=True, parallel=True)
def census_ordered(n, k, nchunks, hist):
    """Count ranks over all 2^{n(k+1)} parameter points.

    hist has shape (nchunks, min(2n,k)+1); chunk c owns the contiguous index
    range [lo_c, hi_c).
    """
    width = k + 1
    total = np.int64(1) << (n * width)
    amask = (np.int64(1) << width) - 1
    rmask = (np.int64(1) << k) - 1
    for c in prange(nchunks):
        lo = total * c // nchunks
        hi = total * (c + 1) // nchunks
        base = np.zeros(2 * n, dtype=np.int64)
        lows = np.zeros(2 * n, dtype=np.int64)
        for g in range(lo, hi):
            nb = 0
            for j in range(n):
                a = (g >> (j * width)) & amask
                for s in range(2):
                    r = (a >> s) & rmask
                    for t in range(nb):
                        if r & lows[t]:
                            r ^= base[t]
                    if r != 0:
                        low = r & (-r)
                        pos = nb
                        while pos > 0 and lows[pos - 1] > low:
                            base[pos] = base[pos - 1]
                            lows[pos] = lows[pos - 1]
                            pos -= 1
                        base[pos] = r
                        lows[pos] = low
                        nb += 1
            hist[c, nb] += 1


@njit(cache=True, parallel=True)
def census_multiset(n, k, nchunks, hist):
    """Count ranks over unordered block multisets, weighted by the number of
    orderings (rank is invariant under block permutation).

    Chunk c owns every smallest-element value v0 with v0 % nchunks == c; the
    inner odometer walks the nondecreasing completions of (v0, ...).
    """
    width = k + 1
    nvals = np.int64(1) << width
    rmask = (np.int64(1) << k) - 1
    fact = np.ones(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        fact[i] = fact[i - 1] * i
    for c in prange(nchunks):
        vals = np.zeros(n, dtype=np.int64)
        base = np.zeros(2 * n, dtype=np.int64)
        lows = np.zeros(2 * n, dtype=np.int64)
        v0 = np.int64(c)
        while v0 < nvals:
            for i in range(n):
                vals[i] = v0
            while True:
                nb = 0
                for j in range(n):
                    a = vals[j]
                    for s in range(2):
                        r = (a >> s) & rmask
                        for t in range(nb):
                            if r & lows[t]:
                                r ^= base[t]
                        if r != 0:
                            low = r & (-r)
                            pos = nb
                            while pos > 0 and lows[pos - 1] > low:
                                base[pos] = base[pos - 1]
                                lows[pos] = lows[pos - 1]
                                pos -= 1
                            base[pos] = r
                            lows[pos] = low
                            nb += 1
                weight = fact[n]
                i = 0
                while i < n:
                    j = i + 1
                    while j < n and vals[j] == vals[i]:
                        j += 1
                    weight //= fact[j - i]
                    i = j
                hist[c, nb] += weight
                pos = n - 1
                while pos >= 1 and vals[pos] == nvals - 1:
                    pos -= 1
                if pos == 0:
                    break
                vals[pos] += 1
                for q in range(pos + 1, n):
                    vals[q] = vals[pos]
            v0 += nchunks


def run_ordered(n: int, k: int, nchunks: int, width: int) -> np.ndarray:
    hist = np.zeros((nchunks, width), dtype=np.int64)
    census_ordered(n, k, nchunks, hist)
    return hist.sum(axis=0)


def run_multiset(n: int, k: int, nchunks: int, width: int) -> np.ndarray:
    hist = np.zeros((nchunks, width), dtype=np.int64)
    census_multiset(n, k, nchunks, hist)
    return hist.sum(axis=0)
