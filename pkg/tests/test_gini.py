import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from extgini.gini import (
    compare,
    convergence_bound,
    double_sum_fast,
    double_sum_naive,
    gini_mean_difference,
    w_prefix,
    w_prefix_at,
    w_prefix_trace,
    welfare_estimate,
    welfare_estimate_stream,
    welfare_exact,
)
from extgini.streams import Alphabet, Stream, frequencies, power_sparse_values, swap_coordinates

from conftest import brute_pair_sum

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
rational_lists = st.lists(rationals, min_size=1, max_size=60)


def test_double_sum_examples():
    assert brute_pair_sum([2, 3, 5]) == 12
    assert double_sum_naive([2, 3, 5]) == 12
    assert double_sum_naive([Fraction(7, 3)] * 5) == 0
    assert double_sum_naive([1, 4]) == 6
    assert double_sum_fast([2, 3, 5]) == 12
    assert double_sum_fast([5, 3, 2]) == 12
    assert double_sum_fast([0]) == 0


def test_double_sum_rejects_empty_and_naive_cap():
    with pytest.raises(ValueError):
        double_sum_fast([])
    with pytest.raises(ValueError):
        double_sum_naive([0] * 5001)


@given(rational_lists)
def test_naive_matches_brute(v):
    assert double_sum_naive(v) == brute_pair_sum(v)


@given(rational_lists, st.randoms())
def test_fast_matches_naive_and_is_permutation_invariant(v, rnd):
    w = list(v)
    rnd.shuffle(w)
    assert double_sum_fast(v) == double_sum_naive(v) == double_sum_fast(w)


@given(rational_lists, rationals, st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=10))
def test_translation_and_homogeneity(v, c, lam):
    base = double_sum_fast(v)
    assert double_sum_fast([x + c for x in v]) == base
    assert double_sum_fast([lam * x for x in v]) == lam * base


def test_w_prefix_examples(s235):
    assert w_prefix(s235, 3, 1).normalized == Fraction(4, 3)
    v = w_prefix(s235, 3, 2)
    assert v.raw_double_sum == 48 == brute_pair_sum([2, 2, 3, 3, 5, 5])
    assert v.normalized == Fraction(4, 3) and v.n == 6
    assert w_prefix(Stream.constant(3), 4, 7).normalized == 0


def test_w_prefix_trace_matches_pointwise():
    s = Stream.from_values([1, 4, 4, 2], preperiod=[5, "1/2"])
    trace = w_prefix_trace(s, 3, 20)
    for N in (1, 2, 7, 20):
        assert trace[N - 1] == w_prefix(s, 3, N)
    assert w_prefix_at(s, 5).raw_double_sum == brute_pair_sum(s.prefix(5))


def test_welfare_exact_examples(s235):
    assert welfare_exact(s235).value == Fraction(-4, 3)
    # oracle: the prefix functional at a whole number of periods
    assert w_prefix(s235, 3, 1000).normalized == Fraction(4, 3)
    s145 = Stream.from_values([1, 4, 5])
    assert welfare_exact(s145).value == Fraction(-16, 9)
    assert w_prefix(s145, 3, 1000).normalized == Fraction(16, 9)
    assert welfare_exact(Stream.constant(2)).value == 0
    assert welfare_exact(s235).mode == "exact"


def test_compare_examples(s235):
    assert compare(s235, Stream.from_values([1, 4, 5])) == "greater"
    assert compare(Stream.from_values([1, 4, 5]), s235) == "less"
    assert compare(s235, s235) == "equal"
    a, b = Stream.from_values([2, 3]), Stream.from_values([1, 4])
    assert welfare_exact(a).value == Fraction(-1, 2) == -w_prefix(a, 2, 1000).normalized
    assert welfare_exact(b).value == Fraction(-3, 2) == -w_prefix(b, 2, 1000).normalized
    assert compare(a, b) == "greater"


def test_gini_mean_difference_brute():
    f = {Fraction(0): Fraction(1, 6), Fraction(1): Fraction(1, 2), Fraction(3): Fraction(1, 3)}
    brute = sum(fa * fb * abs(a - b) for a, fa in f.items() for b, fb in f.items())
    assert gini_mean_difference(f) == brute


def test_welfare_estimate_periodic(s235):
    est = welfare_estimate(s235.values(), 3, 100)
    assert est.mode == "estimated"
    assert all(w == Fraction(4, 3) for _, w in est.trace)
    assert all(t == Fraction(4, 3) for t in est.tail_inf)
    assert est.value == Fraction(-4, 3)


def test_welfare_estimate_constant():
    est = welfare_estimate(Stream.constant(5).values(), 2, 30)
    assert all(w == 0 for _, w in est.trace)


def test_welfare_estimate_exhaustion():
    with pytest.raises(ValueError, match="exhausted"):
        welfare_estimate([1, 2, 3], 2, 5)


def test_welfare_estimate_sparse():
    est = welfare_estimate(power_sparse_values(10, 1, 4), 10, 10**4)
    vals = [w for _, w in est.trace]
    # oracle at small horizons
    it = power_sparse_values(10, 1, 4)
    first = [next(it) for _ in range(300)]
    for N in (1, 5, 10, 30):
        H = 10 * N
        assert vals[N - 1] == brute_pair_sum(first[:H]) / (H * H)
    # a block without a power of ten only adds 4s, so W_N strictly decreases
    for N in range(2, 10**4 + 1):
        H = 10 * N
        if not any(H - 10 < 10**k <= H for k in range(1, 6)):
            assert vals[N - 1] < vals[N - 2]
    assert vals[-1] < Fraction(1, 1000)


def test_estimate_stream_matches_generic():
    s = Stream.from_values([1, 4, 2], preperiod=[3, 3])
    a = welfare_estimate(s.values(), 2, 40)
    b = welfare_estimate_stream(s, 2, 40)
    assert a.trace == b.trace and a.tail_inf == b.tail_inf and a.value == b.value


st_streams = st.builds(
    lambda vals, pre, per: Stream(Alphabet(sorted(set(vals))), tuple(i % len(set(vals)) for i in pre), tuple(i % len(set(vals)) for i in per)),
    st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=1, max_size=5),
    st.lists(st.integers(0, 4), max_size=4),
    st.lists(st.integers(0, 4), min_size=1, max_size=5),
)


@settings(max_examples=50)
@given(st_streams, st.integers(1, 4))
def test_bounds_and_convergence(s, h):
    W = welfare_exact(s).value
    diam = s.alphabet.diameter
    assert -diam <= W <= 0
    for v in w_prefix_trace(s, h, 60):
        assert 0 <= v.normalized <= diam
        assert abs(v.normalized + W) <= convergence_bound(s, v.n)


@settings(max_examples=50)
@given(st_streams, st.fractions(min_value=-3, max_value=3, max_denominator=5), st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=4))
def test_welfare_affine(s, c, lam):
    W = welfare_exact(s).value
    assert welfare_exact(s.affine(1, c)).value == W
    assert welfare_exact(s.affine(lam, 0)).value == lam * W


@settings(max_examples=50)
@given(st_streams, st.integers(1, 12), st.integers(1, 12))
def test_finite_swap_invariance(s, i, j):
    if i == j:
        return
    t = swap_coordinates(s, i, j)
    assert welfare_exact(t).value == welfare_exact(s).value
    a, b = w_prefix_trace(s, 1, 40), w_prefix_trace(t, 1, 40)
    for n in range(max(i, j), 41):
        assert a[n - 1] == b[n - 1]


def test_welfare_depends_only_on_frequencies():
    rng = random.Random(3)
    for _ in range(30):
        per = [rng.randint(0, 3) for _ in range(rng.randint(1, 6))]
        shuffled = per[:]
        rng.shuffle(shuffled)
        a = Stream(Alphabet(range(4)), tuple(rng.randint(0, 3) for _ in range(3)), tuple(per))
        b = Stream(Alphabet(range(4)), (), tuple(shuffled * 2))
        assert frequencies(a) == frequencies(b)
        assert welfare_exact(a).value == welfare_exact(b).value
