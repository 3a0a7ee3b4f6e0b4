"""Pure-Python pairwise-difference kernels on integer data.

Mirror of ``_ckernels.pyx``; used when the extension is not built or
when the data would overflow 64-bit arithmetic.
"""

from __future__ import annotations


def pair_sum_naive(a):
    """Sum of |a_i - a_j| over all ordered pairs, by direct double loop."""
    a = list(a)
    n = len(a)
    total = 0
    for i in range(n):
        ai = a[i]
        for j in range(i + 1, n):
            d = ai - a[j]
            total += d if d >= 0 else -d
    return 2 * total


def pair_sum_sorted(a):
    """Same quantity via sorting: 2 * sum_i (2i - n - 1) * a_(i)."""
    s = sorted(a)
    n = len(s)
    total = 0
    for i, v in enumerate(s, start=1):
        total += (2 * i - n - 1) * v
    return 2 * total


def prefix_pair_sums(ranks, vals, m, h):
    """Pair sums of the prefixes of length h, 2h, ... of a rank-coded sequence.

    ``ranks[t]`` is the position of element t in the sorted table ``vals``
    of ``m`` distinct values. Two Fenwick trees keep counts and value sums
    of the elements seen so far, so each insertion costs O(log m).
    """
    cnt = [0] * (m + 1)
    sm = [0] * (m + 1)
    seen = 0
    seen_sum = 0
    raw = 0
    out = []
    n = len(ranks)
    for t in range(n):
        r = ranks[t]
        v = vals[r]
        # elements strictly below rank r
        i = r
        c_lo = 0
        s_lo = 0
        while i > 0:
            c_lo += cnt[i]
            s_lo += sm[i]
            i -= i & -i
        # elements at or below rank r
        i = r + 1
        c_le = 0
        s_le = 0
        while i > 0:
            c_le += cnt[i]
            s_le += sm[i]
            i -= i & -i
        c_hi = seen - c_le
        s_hi = seen_sum - s_le
        raw += 2 * (v * c_lo - s_lo + s_hi - v * c_hi)
        i = r + 1
        while i <= m:
            cnt[i] += 1
            sm[i] += v
            i += i & -i
        seen += 1
        seen_sum += v
        if (t + 1) % h == 0:
            out.append(raw)
    return out
