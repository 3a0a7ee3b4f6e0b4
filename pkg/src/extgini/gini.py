"""The extended Gini welfare index on utility streams.

For a prefix of length H the index works with the raw pair sum
``sum_k sum_j |x_k - x_j|`` normalised by ``H**2``; the welfare of the
whole stream is minus the lim inf of that along horizons ``H_N = N*h``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import islice
from typing import Iterable, Optional

from . import kernels
from .streams import Alphabet, Stream, frequencies

NAIVE_LIMIT = 5000


@dataclass(frozen=True)
class PrefixGiniValue:
    n: int
    raw_double_sum: Fraction
    normalized: Fraction


@dataclass
class WelfareValue:
    """Either an exact welfare value or a finite-horizon estimate.

    In ``estimated`` mode ``trace`` lists ``(N, W_N)`` and ``tail_inf[t]``
    is ``min(W_N for N in trace[t:])``; ``value`` is minus the tail
    infimum over the second half of the trace.
    """

    mode: str
    value: Fraction
    trace: list[tuple[int, Fraction]] = field(default_factory=list)
    tail_inf: list[Fraction] = field(default_factory=list)

    @property
    def liminf_estimate(self) -> Fraction:
        return -self.value


def double_sum_naive(values: Iterable) -> Fraction:
    """Oracle: direct O(n^2) sum of |v_k - v_j| over ordered pairs."""
    values = list(values)
    if not values:
        raise ValueError("need at least one value")
    if len(values) > NAIVE_LIMIT:
        raise ValueError(f"naive pair sum is capped at {NAIVE_LIMIT} values")
    a, den = kernels.to_integers(values)
    return Fraction(kernels.pair_sum_naive_int(a), den)


def double_sum_fast(values: Iterable) -> Fraction:
    """O(n log n) pair sum via the rank-weighted formula on sorted values."""
    values = list(values)
    if not values:
        raise ValueError("need at least one value")
    a, den = kernels.to_integers(values)
    return Fraction(kernels.pair_sum_sorted_int(a), den)


def _scaled_alphabet(alphabet: Alphabet) -> tuple[list[int], int]:
    a, den = kernels.to_integers(list(alphabet))
    lo = min(a)
    return [x - lo for x in a], den


def _stream_raw_sums(s: Stream, h: int, n_max: int) -> list[Fraction]:
    """Raw pair sums at H_N = N*h for N = 1..n_max, straight from alphabet indices."""
    ints, den = _scaled_alphabet(s.alphabet)
    # alphabet positions are already ranks of the shifted, increasing integers
    ranks = s.prefix_indices(n_max * h)
    raws = kernels.prefix_pair_sums_ranked(ranks, ints, h)
    return [Fraction(r, den) for r in raws]


def w_prefix(s: Stream, h: int, N: int) -> PrefixGiniValue:
    if h < 1 or N < 1:
        raise ValueError("h and N must be positive")
    H = N * h
    raw = double_sum_fast(s.prefix(H))
    return PrefixGiniValue(H, raw, raw / (H * H))


def w_prefix_at(s: Stream, n: int) -> PrefixGiniValue:
    """Prefix functional at an arbitrary length n (not just a block horizon)."""
    return w_prefix(s, 1, n)


def w_prefix_trace(s: Stream, h: int, n_max: int) -> list[PrefixGiniValue]:
    """``w_prefix(s, h, N)`` for every N = 1..n_max in one incremental pass."""
    if h < 1 or n_max < 1:
        raise ValueError("h and n_max must be positive")
    out = []
    for N, raw in enumerate(_stream_raw_sums(s, h, n_max), start=1):
        H = N * h
        out.append(PrefixGiniValue(H, raw, raw / (H * H)))
    return out


def gini_mean_difference(freqs: dict) -> Fraction:
    """``sum_{a,b} f_a f_b |a - b|`` over a finite distribution."""
    items = sorted(freqs.items())
    total = Fraction(0)
    mass = Fraction(0)
    moment = Fraction(0)
    # each b pairs with all smaller a: f_b * sum_a f_a (b - a)
    for b, fb in items:
        total += fb * (b * mass - moment)
        mass += fb
        moment += fb * b
    return 2 * total


def welfare_exact(s: Stream) -> WelfareValue:
    """W(s) for an eventually periodic stream.

    Along any horizon sequence the prefix distribution converges to the
    period frequencies, so the lim inf is the Gini mean difference of
    those frequencies.
    """
    return WelfareValue("exact", -gini_mean_difference(frequencies(s)))


def welfare_estimate(values_source: Iterable, h: int, n_max: int) -> WelfareValue:
    """Finite-horizon estimate of W from the first ``n_max * h`` values.

    Raises ValueError if the source runs out early.
    """
    if h < 1 or n_max < 1:
        raise ValueError("h and n_max must be positive")
    H = n_max * h
    values = list(islice(iter(values_source), H))
    if len(values) < H:
        raise ValueError(f"value source exhausted after {len(values)} of {H} values")
    a, den = kernels.to_integers(values)
    raws = kernels.prefix_pair_sums_int(a, h)
    trace = []
    for N, raw in enumerate(raws, start=1):
        HN = N * h
        trace.append((N, Fraction(raw, den * HN * HN)))
    return _estimate_from_trace(trace)


def _estimate_from_trace(trace: list[tuple[int, Fraction]]) -> WelfareValue:
    tail = [Fraction(0)] * len(trace)
    running: Optional[Fraction] = None
    for t in range(len(trace) - 1, -1, -1):
        w = trace[t][1]
        running = w if running is None or w < running else running
        tail[t] = running
    half = (len(trace) - 1) // 2
    return WelfareValue("estimated", -tail[half], trace, tail)


def welfare_estimate_stream(s: Stream, h: int, n_max: int) -> WelfareValue:
    """:func:`welfare_estimate` specialised to a Stream (no Fraction round trip)."""
    trace = [(N, v.normalized) for N, v in enumerate(w_prefix_trace(s, h, n_max), start=1)]
    return _estimate_from_trace(trace)


def compare(s1: Stream, s2: Stream) -> str:
    w1, w2 = welfare_exact(s1).value, welfare_exact(s2).value
    if w1 > w2:
        return "greater"
    if w1 < w2:
        return "less"
    return "equal"


def convergence_bound(s: Stream, H: int) -> Fraction:
    """Ceiling on |W_N - lim| at horizon H for an eventually periodic stream."""
    return Fraction(4 * (s.transient_length + s.period_length)) * s.alphabet.diameter / H
