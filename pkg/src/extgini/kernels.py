"""Exact pairwise-difference sums with a compiled fast path.

Rationals are brought to a common denominator and shifted so the
minimum is zero; the resulting integers go to the Cython kernels when
the worst-case intermediate fits in int64, and to the pure-Python
kernels otherwise. ``EXTGINI_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import os
from fractions import Fraction
from math import lcm
from typing import Sequence

from . import _kernels_py

try:
    if os.environ.get("EXTGINI_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    import numpy as np

    from . import _ckernels
except ImportError:
    _ckernels = None

BACKEND = "cython" if _ckernels is not None else "python"

_INT64_BUDGET = 1 << 62


def to_integers(values: Sequence[Fraction]) -> tuple[list[int], int]:
    """Common-denominator integers ``a`` with ``values[i] == a[i] / den``."""
    den = lcm(*(Fraction(v).denominator for v in values)) if values else 1
    return [v.numerator * (den // v.denominator) for v in map(Fraction, values)], den


def _fits(n: int, span: int) -> bool:
    return 2 * n * n * max(span, 1) < _INT64_BUDGET


def _shifted(a: list[int]) -> tuple[list[int], int]:
    lo = min(a)
    return [x - lo for x in a], max(a) - lo


def pair_sum_naive_int(a: list[int], backend: str | None = None) -> int:
    a, span = _shifted(a)
    if _use_c(backend) and _fits(len(a), span):
        return _ckernels.pair_sum_naive(np.asarray(a, dtype=np.int64))
    return _kernels_py.pair_sum_naive(a)


def pair_sum_sorted_int(a: list[int], backend: str | None = None) -> int:
    a, span = _shifted(a)
    if _use_c(backend) and _fits(len(a), span):
        return _ckernels.pair_sum_sorted(np.asarray(a, dtype=np.int64))
    return _kernels_py.pair_sum_sorted(a)


def prefix_pair_sums_int(a: list[int], h: int, backend: str | None = None) -> list[int]:
    """Pair sums of the prefixes of length h, 2h, ..., (len(a) // h) * h."""
    if not a:
        return []
    a, span = _shifted(a)
    distinct = sorted(set(a))
    rank = {v: r for r, v in enumerate(distinct)}
    ranks = [rank[v] for v in a]
    return prefix_pair_sums_ranked(ranks, distinct, h, backend)


def prefix_pair_sums_ranked(ranks, distinct: list[int], h: int, backend: str | None = None) -> list[int]:
    """As :func:`prefix_pair_sums_int` with the data already rank-coded.

    ``distinct`` must be sorted, non-negative integers.
    """
    n = len(ranks)
    span = distinct[-1] - distinct[0] if distinct else 0
    if _use_c(backend) and _fits(n, max(span, distinct[-1] if distinct else 0)):
        out = _ckernels.prefix_pair_sums(
            np.ascontiguousarray(ranks, dtype=np.int64),
            np.asarray(distinct, dtype=np.int64),
            len(distinct),
            h,
        )
        return [int(x) for x in out]
    return _kernels_py.prefix_pair_sums(list(ranks), distinct, len(distinct), h)


def _use_c(backend: str | None) -> bool:
    if backend is None:
        return _ckernels is not None
    if backend == "cython":
        if _ckernels is None:
            raise RuntimeError("compiled kernels are not available")
        return True
    if backend == "python":
        return False
    raise ValueError(f"unknown backend {backend!r}")
