"""Exit criteria. Each test is one criterion; run ``pytest tests/test_acceptance.py``
for a PASS/FAIL line per criterion in the terminal summary."""

import json
import random
import time
from fractions import Fraction

import pytest

from extgini.axioms import VARIANTS, prop1_bound_trace, random_instance, verify_transfer, welfare_gap_bound
from extgini.cli import main
from extgini.gini import (
    compare,
    convergence_bound,
    double_sum_fast,
    double_sum_naive,
    w_prefix,
    w_prefix_trace,
    welfare_estimate,
    welfare_exact,
)
from extgini.streams import Alphabet, Stream, power_sparse_values, swap_coordinates


@pytest.fixture(scope="module")
def corpus():
    rng = random.Random(20240501)
    return [random_instance(rng, max_h=8, max_blocks=6, max_alphabet=6) for _ in range(500)]


def random_stream(rng):
    m = rng.randint(1, 6)
    den = rng.randint(1, 6)
    alphabet = Alphabet.from_values(Fraction(rng.randint(-12, 12), den) for _ in range(m))
    m = len(alphabet)
    pre = tuple(rng.randrange(m) for _ in range(rng.randint(0, 6)))
    per = tuple(rng.randrange(m) for _ in range(rng.randint(1, 8)))
    return Stream(alphabet, pre, per)


@pytest.mark.acceptance("1. motivating ranking")
def test_motivating_ranking(criterion):
    t = time.perf_counter()
    x = Stream.from_values([2, 3, 5])
    y = Stream.from_values([1, 4, 5])
    wx, wy = welfare_exact(x).value, welfare_exact(y).value
    assert wx == Fraction(-4, 3)
    assert wy == Fraction(-16, 9)
    assert compare(x, y) == "greater"
    assert w_prefix(x, 3, 1000).normalized == -wx
    assert w_prefix(y, 3, 1000).normalized == -wy
    elapsed = time.perf_counter() - t
    assert elapsed < 1
    criterion["detail"] = f"W(x)={wx} W(y)={wy} in {elapsed:.3f}s"


@pytest.mark.acceptance("2. oracle equivalence")
def test_oracle_equivalence(criterion):
    rng = random.Random(7)
    t = time.perf_counter()
    for _ in range(10_000):
        n = rng.randint(1, 200)
        v = [Fraction(rng.randint(-100, 100), rng.randint(1, 20)) for _ in range(n)]
        assert double_sum_fast(v) == double_sum_naive(v)
    elapsed = time.perf_counter() - t
    assert elapsed < 30
    criterion["detail"] = f"10^4 lists in {elapsed:.1f}s"


@pytest.mark.acceptance("3. density-squared bound")
def test_prop1_bound(corpus, criterion):
    t = time.perf_counter()
    worst = None
    for inst in corpus:
        assert verify_transfer(inst, "sAPD").valid
        rows = prop1_bound_trace(inst, 200)
        failing = [r.N for r in rows if r.slack < 0]
        assert not failing, f"bound fails at N={failing[:5]}"
        gap, bound = welfare_gap_bound(inst)
        assert gap >= bound
        ratio = gap / bound
        worst = ratio if worst is None or ratio < worst else worst
    elapsed = time.perf_counter() - t
    assert elapsed < 300
    criterion["detail"] = f"500 instances, min gap/bound={float(worst):.3f}, {elapsed:.1f}s"


@pytest.mark.acceptance("4. five-pair scan")
def test_case4_scan(capsys, criterion):
    t = time.perf_counter()
    code = main(["case4-scan", "--value-max", "6", "--eps-max", "2"])
    out = json.loads(capsys.readouterr().out)
    elapsed = time.perf_counter() - t
    assert code == 0
    assert out["violations"] == 0
    assert elapsed < 60
    criterion["detail"] = f"{out['configurations']} configurations, worst slack {out['worst_slack']}"


@pytest.mark.acceptance("5. anonymity")
def test_anonymity(criterion):
    rng = random.Random(99)
    checked = 0
    for _ in range(100):
        s = random_stream(rng)
        i = rng.randint(1, 30)
        j = rng.choice([k for k in range(1, 31) if k != i])
        t = swap_coordinates(s, i, j)
        assert welfare_exact(t).value == welfare_exact(s).value
        h = rng.randint(1, 4)
        n_max = 150
        a, b = w_prefix_trace(s, h, n_max), w_prefix_trace(t, h, n_max)
        for N in range(1, n_max + 1):
            if N * h >= max(i, j):
                assert a[N - 1].normalized == b[N - 1].normalized
                checked += 1
    criterion["detail"] = f"{checked} horizons compared"


@pytest.mark.acceptance("6. convergence certificate")
def test_convergence_certificate(criterion):
    rng = random.Random(123)
    for _ in range(50):
        s = random_stream(rng)
        W = welfare_exact(s).value
        h = rng.randint(1, 3)
        for v in w_prefix_trace(s, h, 1000):
            assert abs(v.normalized + W) <= convergence_bound(s, v.n)
    criterion["detail"] = "50 streams, N <= 1000"


@pytest.mark.acceptance("7. sparse degeneracy")
def test_sparse_degeneracy(criterion):
    x = welfare_estimate(power_sparse_values(10, 1, 4), 10, 10**4)
    y = welfare_estimate(power_sparse_values(10, 2, 3), 10, 10**4)
    assert x.trace[-1][0] * 10 == 10**5
    for est in (x, y):
        assert est.tail_inf[-1] <= Fraction(1, 100)
        assert est.liminf_estimate <= Fraction(1, 100)
    criterion["detail"] = f"final W_N x={float(x.trace[-1][1]):.2e} y={float(y.trace[-1][1]):.2e}"


@pytest.mark.acceptance("8. vanishing gap probe")
def test_prop2_probe(capsys, criterion):
    t = time.perf_counter()
    code = main(["prop2", "--k-max", "20"])
    out = json.loads(capsys.readouterr().out)
    elapsed = time.perf_counter() - t
    assert code == 0
    gaps = [Fraction(r["gap"]) for r in out["rows"]]
    assert len(gaps) == 20
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < Fraction(1, 40)
    assert elapsed < 1
    criterion["detail"] = f"final gap {gaps[-1]}"


@pytest.mark.acceptance("9. axiom lattice")
def test_axiom_lattice(corpus, criterion):
    inversions = 0
    full = positive = 0
    for inst in corpus:
        c = {v: verify_transfer(inst, v).valid for v in VARIANTS}
        cert = verify_transfer(inst, "GPD")
        everything = all(e is not None for t in inst.alpha.block_preperiod + inst.alpha.block_period for e in t)
        if everything:
            full += 1
            inversions += not c["WPD"]
        if cert.dom_density.lower > 0:
            positive += 1
            inversions += not c["APD"]
        inversions += c["WPD"] and not c["APD"]
        inversions += c["APD"] and not c["IPD"]
        inversions += c["IPD"] and not c["GPD"]
        inversions += c["sAPD"] and not (c["APD"] and c["sGPD"])
    assert inversions == 0
    assert full > 0 and positive == len(corpus)
    criterion["detail"] = f"{full} full-domain, {positive} positive-density instances"
