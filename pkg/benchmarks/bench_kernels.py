"""Compare the compiled and pure-Python pair-sum kernels.

    python benchmarks/bench_kernels.py [--sizes 1000 100000 1000000]
"""

import argparse
import random
import time

from extgini import kernels


def timed(fn, *args):
    t = time.perf_counter()
    out = fn(*args)
    return time.perf_counter() - t, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[1_000, 100_000, 1_000_000])
    ap.add_argument("--naive-size", type=int, default=3_000)
    ap.add_argument("--alphabet", type=int, default=5, help="distinct values in the prefix-trace input")
    ap.add_argument("--h", type=int, default=10)
    args = ap.parse_args()

    backends = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])
    if len(backends) == 1:
        print("compiled kernels not built; timing the Python fallback only")
    rng = random.Random(0)

    print(f"{'kernel':<18}{'n':>10}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    a = [rng.randint(0, 1000) for _ in range(args.naive_size)]
    row = [timed(kernels.pair_sum_naive_int, a, b) for b in backends]
    _report("pair_sum_naive", len(a), row)

    for n in args.sizes:
        a = [rng.randint(0, 10**6) for _ in range(n)]
        _report("pair_sum_sorted", n, [timed(kernels.pair_sum_sorted_int, a, b) for b in backends])
        a = [rng.randrange(args.alphabet) for _ in range(n)]
        _report("prefix_pair_sums", n, [timed(kernels.prefix_pair_sums_int, a, args.h, b) for b in backends])


def _report(name, n, results):
    outs = {repr(o) for _, o in results}
    assert len(outs) == 1, f"{name}: backends disagree"
    times = [t for t, _ in results]
    speed = f"{times[0] / times[1]:9.1f}x" if len(times) == 2 and times[1] > 0 else ""
    print(f"{name:<18}{n:>10}" + "".join(f"{t:>11.4f}s" for t in times) + f"{speed:>10}")


if __name__ == "__main__":
    main()
