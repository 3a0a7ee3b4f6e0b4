# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled pairwise-difference kernels on int64 data.

Callers must guarantee that every intermediate fits in int64; see
``extgini.kernels`` for the guard.
"""

import numpy as np

from libc.stdint cimport int64_t


def pair_sum_naive(const int64_t[::1] a):
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j
    cdef int64_t total = 0
    cdef int64_t d, ai
    for i in range(n):
        ai = a[i]
        for j in range(i + 1, n):
            d = ai - a[j]
            if d < 0:
                d = -d
            total += d
    return 2 * <object>total


def pair_sum_sorted(const int64_t[::1] a):
    cdef int64_t[::1] s = np.sort(np.asarray(a))
    cdef Py_ssize_t n = s.shape[0]
    cdef Py_ssize_t i
    cdef int64_t total = 0
    for i in range(n):
        total += (2 * (i + 1) - n - 1) * s[i]
    return 2 * <object>total


def prefix_pair_sums(const int64_t[::1] ranks, const int64_t[::1] vals, Py_ssize_t m, Py_ssize_t h):
    cdef Py_ssize_t n = ranks.shape[0]
    cdef int64_t[::1] cnt = np.zeros(m + 1, dtype=np.int64)
    cdef int64_t[::1] sm = np.zeros(m + 1, dtype=np.int64)
    out_arr = np.zeros(n // h, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef int64_t seen = 0, seen_sum = 0, raw = 0
    cdef int64_t v, c_lo, s_lo, c_le, s_le
    cdef Py_ssize_t t, i, r, k = 0
    for t in range(n):
        r = ranks[t]
        v = vals[r]
        i = r
        c_lo = 0
        s_lo = 0
        while i > 0:
            c_lo += cnt[i]
            s_lo += sm[i]
            i -= i & -i
        i = r + 1
        c_le = 0
        s_le = 0
        while i > 0:
            c_le += cnt[i]
            s_le += sm[i]
            i -= i & -i
        raw += 2 * (v * c_lo - s_lo + (seen_sum - s_le) - v * (seen - c_le))
        i = r + 1
        while i <= m:
            cnt[i] += 1
            sm[i] += v
            i += i & -i
        seen += 1
        seen_sum += v
        if (t + 1) % h == 0:
            out[k] = raw
            k += 1
    return out_arr
