"""Command-line interface.

Every command writes exactly one JSON document to stdout. Exit codes:
0 success, 1 invalid certificate or failed bound, 2 malformed input.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Optional

from . import axioms, gini
from .streams import Stream, format_rational, power_sparse_values, stream_from_json

FAST_LIMIT = 10**6

PERIODIC_DEMOS = {
    "periodic-235": lambda: Stream.from_values([2, 3, 5], alphabet=[1, 2, 3, 4, 5]),
    "periodic-145": lambda: Stream.from_values([1, 4, 5], alphabet=[1, 2, 3, 4, 5]),
}
SPARSE_DEMOS = {
    "sparse10": lambda: power_sparse_values(10, 1, 4),
    "sparse10-equal": lambda: power_sparse_values(10, 2, 3),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _decimal(q: Fraction) -> str:
    with localcontext() as ctx:
        ctx.prec = 60
        return f"{Decimal(q.numerator) / Decimal(q.denominator):.12f}"


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh, parse_float=_reject_float)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _reject_float(token):
    raise ValueError(f"floating point value {token} not allowed; use \"p/q\"")


def load_stream(spec: str) -> Stream:
    """A stream JSON file, or ``demo:<name>`` for a built-in periodic stream."""
    if spec.startswith("demo:"):
        name = spec[5:]
        if name not in PERIODIC_DEMOS:
            raise UsageError(f"unknown periodic demo {name!r}; choose from {sorted(PERIODIC_DEMOS)}")
        return PERIODIC_DEMOS[name]()
    return stream_from_json(_load_json(spec))


def _emit(payload: dict) -> None:
    json.dump(payload, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _welfare_payload(s: Stream) -> tuple[str, str]:
    w = gini.welfare_exact(s).value
    return format_rational(w), _decimal(w)


def cmd_welfare(args) -> int:
    s = load_stream(args.stream)
    w, dec = _welfare_payload(s)
    _emit({"W": w, "W_decimal": dec, "mode": "exact"})
    return 0


def cmd_compare(args) -> int:
    a, b = load_stream(args.stream_a), load_stream(args.stream_b)
    wa, _ = _welfare_payload(a)
    wb, _ = _welfare_payload(b)
    _emit({"order": gini.compare(a, b), "W_a": wa, "W_b": wb})
    return 0


def cmd_verify(args) -> int:
    inst = axioms.instance_from_json(_load_json(args.instance))
    cert = axioms.verify_transfer(inst, args.variant, args.step)
    for v in cert.violations:
        print(v, file=sys.stderr)
    _emit(cert.to_json())
    return 0 if cert.valid else 1


def _check_horizon(n_max: int, h: int) -> None:
    if n_max < 1 or h < 1:
        raise UsageError("--n-max and --h must be positive")
    if n_max * h > FAST_LIMIT:
        raise UsageError(f"horizon {n_max * h} exceeds the supported {FAST_LIMIT}")


def cmd_prop1(args) -> int:
    inst = axioms.instance_from_json(_load_json(args.instance))
    _check_horizon(args.n_max, inst.alpha.h)
    cert = axioms.verify_transfer(inst, "sAPD")
    if not cert.valid:
        for v in cert.violations:
            print(v, file=sys.stderr)
        _emit({"valid_instance": False, "violations": cert.violations})
        return 1
    rows = axioms.prop1_bound_trace(inst, args.n_max)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["N", "raw_x", "raw_y", "D", "bound", "slack"])
            for r in rows:
                w.writerow([r.N, format_rational(r.raw_x), format_rational(r.raw_y), r.D,
                            format_rational(r.bound), format_rational(r.slack)])
    failures = [r.N for r in rows if not r.holds]
    for n in failures:
        print(f"bound fails at N={n}", file=sys.stderr)
    gap, bound = axioms.welfare_gap_bound(inst)
    _emit({
        "valid_instance": True,
        "n_max": args.n_max,
        "all_hold": not failures,
        "failures": failures,
        "min_slack": format_rational(min(r.slack for r in rows)),
        "final_slack": format_rational(rows[-1].slack),
        "welfare_gap": format_rational(gap),
        "welfare_gap_bound": format_rational(bound),
    })
    return 0 if not failures else 1


def cmd_convergence(args) -> int:
    _check_horizon(args.n_max, args.h)
    if args.demo is not None and args.stream is not None:
        raise UsageError("give either a stream file or --demo, not both")
    if args.demo in SPARSE_DEMOS:
        est = gini.welfare_estimate(SPARSE_DEMOS[args.demo](), args.h, args.n_max)
    elif args.demo is not None:
        if args.demo not in PERIODIC_DEMOS:
            raise UsageError(f"unknown demo {args.demo!r}")
        est = gini.welfare_estimate_stream(PERIODIC_DEMOS[args.demo](), args.h, args.n_max)
    elif args.stream is not None:
        est = gini.welfare_estimate_stream(load_stream(args.stream), args.h, args.n_max)
    else:
        raise UsageError("a stream file or --demo is required")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["N", "H_N", "W_N_num", "W_N_den", "running_liminf_num", "running_liminf_den"])
            for (N, wn), inf in zip(est.trace, est.tail_inf):
                w.writerow([N, N * args.h, wn.numerator, wn.denominator, inf.numerator, inf.denominator])
    last = est.trace[-1][1]
    _emit({
        "h": args.h,
        "n_max": args.n_max,
        "final_W_N": format_rational(last),
        "final_running_liminf": format_rational(est.tail_inf[-1]),
        "liminf_estimate": format_rational(est.liminf_estimate),
        "W_estimate": format_rational(est.value),
        "W_estimate_decimal": _decimal(est.value),
    })
    return 0


def cmd_case4_scan(args) -> int:
    if args.value_max < 2 or args.eps_max < 1:
        raise UsageError("need --value-max >= 2 and --eps-max >= 1")
    scan = axioms.case4_scan(args.value_max, args.eps_max)
    for v in scan.violations[:20]:
        print("violation at (y_k, eps_k, y_j, eps_j, y_ak, y_aj) =", v, file=sys.stderr)
    _emit({
        "configurations": scan.configurations,
        "violations": len(scan.violations),
        "worst_slack": None if scan.worst_slack is None else format_rational(scan.worst_slack),
        "violations_eps_j_form": scan.violations_eps_j,
        "worst_ratio": None if scan.worst_ratio is None else format_rational(scan.worst_ratio),
        "violation_examples": [list(v) for v in scan.violations[:20]],
    })
    return 0 if not scan.violations else 1


def cmd_prop2(args) -> int:
    if args.k_max < 1:
        raise UsageError("--k-max must be at least 1")
    rows = axioms.prop2_probe(args.k_max, args.h)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["k", "eps_k", "W_unequal", "W_equal", "gap"])
            for r in rows:
                w.writerow([r.k, format_rational(r.eps), format_rational(r.w_unequal),
                            format_rational(r.w_equal), format_rational(r.gap)])
    gaps = [r.gap for r in rows]
    _emit({
        "k_max": args.k_max,
        "rows": [
            {"k": r.k, "eps_k": format_rational(r.eps), "W_unequal": format_rational(r.w_unequal),
             "W_equal": format_rational(r.w_equal), "gap": format_rational(r.gap)}
            for r in rows
        ],
        "strictly_decreasing": all(a > b for a, b in zip(gaps, gaps[1:])),
        "final_gap": format_rational(gaps[-1]),
        "final_gap_decimal": _decimal(gaps[-1]),
    })
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="extgini", description="Extended Gini welfare index on infinite utility streams.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("welfare", help="exact welfare of an eventually periodic stream")
    s.add_argument("stream", help="stream JSON file or demo:<name>")
    s.set_defaults(func=cmd_welfare)

    s = sub.add_parser("compare", help="rank two streams by welfare")
    s.add_argument("stream_a")
    s.add_argument("stream_b")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("verify", help="certify a transfer instance")
    s.add_argument("instance")
    s.add_argument("--variant", required=True, choices=["pd", "gpd", "s-gpd", "ipd", "apd", "wpd", "s-apd"])
    s.add_argument("--step", type=int, default=None, help="declared step for s-gpd / s-apd")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("prop1", help="check the density-squared welfare bound along horizons")
    s.add_argument("instance")
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--csv")
    s.set_defaults(func=cmd_prop1)

    s = sub.add_parser("convergence", help="W_N trace with running tail infima")
    s.add_argument("stream", nargs="?")
    s.add_argument("--demo", choices=sorted(PERIODIC_DEMOS) + sorted(SPARSE_DEMOS))
    s.add_argument("--h", type=int, required=True)
    s.add_argument("--n-max", type=int, required=True)
    s.add_argument("--csv")
    s.set_defaults(func=cmd_convergence)

    s = sub.add_parser("case4-scan", help="exhaustive five-pair inequality scan")
    s.add_argument("--value-max", type=int, required=True)
    s.add_argument("--eps-max", type=int, required=True)
    s.set_defaults(func=cmd_case4_scan)

    s = sub.add_parser("prop2", help="vanishing-gap probe on an infinite alphabet")
    s.add_argument("--k-max", type=int, required=True)
    s.add_argument("--h", type=int, default=2)
    s.add_argument("--csv")
    s.set_defaults(func=cmd_prop2)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
