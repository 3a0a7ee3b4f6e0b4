"""Anonymity and Pigou-Dalton transfer principles on eventually periodic streams.

Orientation: a :class:`TransferInstance` holds the *unequal* stream
(before the transfers) and the *equal* stream (after them). A valid
instance should be ranked ``equal`` strictly above ``unequal``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Callable, Optional, Union

from . import gini
from .pairing import (
    DensityPair,
    PairingFunction,
    density,
    density_prefix_count,
    domain_is_everything,
    domain_is_finite,
    pairing_domain,
    pairing_from_json,
    pairing_to_json,
    validate_pairing,
)
from .streams import Alphabet, Stream, format_rational, stream_from_json, stream_to_json, swap_coordinates

VARIANTS = ("PD", "GPD", "sGPD", "IPD", "APD", "WPD", "sAPD")

_VARIANT_ALIASES = {
    "pd": "PD", "gpd": "GPD", "s-gpd": "sGPD", "sgpd": "sGPD", "ipd": "IPD",
    "apd": "APD", "wpd": "WPD", "s-apd": "sAPD", "sapd": "sAPD",
}


def normalize_variant(name: str) -> str:
    if name in VARIANTS:
        return name
    try:
        return _VARIANT_ALIASES[name.lower()]
    except KeyError:
        raise ValueError(f"unknown variant {name!r}") from None


class InstanceError(ValueError):
    """Streams or pairing are malformed, or a requested transfer is impossible."""


@dataclass(frozen=True)
class TransferInstance:
    unequal: Stream
    equal: Stream
    alpha: PairingFunction

    @property
    def alphabet(self) -> Alphabet:
        return self.unequal.alphabet.union(self.equal.alphabet)

    def pattern(self) -> tuple[int, int]:
        """(start, length): after ``start`` every per-index check repeats with ``length``."""
        start = max(self.unequal.transient_length, self.equal.transient_length, self.alpha.transient_length)
        length = lcm(self.unequal.period_length, self.equal.period_length, self.alpha.period_length)
        return start, length

    def horizon(self) -> int:
        start, length = self.pattern()
        return start + length

    def epsilon(self, k: int) -> Fraction:
        return abs(self.unequal.value_at(k) - self.equal.value_at(k))

    @property
    def epsilons(self) -> dict[int, Fraction]:
        """Transfer size per paired generation over one full pattern."""
        return {k: self.epsilon(k) for k in range(1, self.horizon() + 1) if self.alpha.apply(k) is not None}


@dataclass
class TransferCertificate:
    variant: str
    instance: TransferInstance
    dom_density: DensityPair
    step: Optional[int]
    valid: bool
    violations: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "variant": self.variant,
            "valid": self.valid,
            "step": self.step,
            "dom_density": {
                "lower": format_rational(self.dom_density.lower),
                "upper": format_rational(self.dom_density.upper),
            },
            "epsilons": {str(k): format_rational(e) for k, e in self.instance.epsilons.items()},
            "violations": list(self.violations),
        }


def _pair_violations(inst: TransferInstance) -> list[str]:
    x, y, alpha = inst.unequal, inst.equal, inst.alpha
    g = inst.alphabet.min_gap
    out = []
    for k in range(1, inst.horizon() + 1):
        p = alpha.apply(k)
        xk, yk = x.value_at(k), y.value_at(k)
        if p is None:
            if xk != yk:
                out.append(f"unpaired generation changed at k={k}")
            continue
        xp, yp = x.value_at(p), y.value_at(p)
        ek, ep = abs(xk - yk), abs(xp - yp)
        if ek == 0 or ek != ep:
            out.append(f"epsilon mismatch at k={k}")
            continue
        if xk + xp != yk + yp:
            out.append(f"leaky transfer at k={k}")
            continue
        if not (xk < yk < yp < xp or xp < yp < yk < xk):
            out.append(f"ordering chain broken at k={k}")
            continue
        if g is not None and ek < g:
            out.append(f"epsilon below alphabet gap at k={k}")
    return out


def verify_transfer(inst: TransferInstance, variant: str, step: Optional[int] = None) -> TransferCertificate:
    """Certify that ``inst`` is a transfer instance of the given principle.

    Violations come back in the certificate; only structurally broken
    pairings raise.
    """
    variant = normalize_variant(variant)
    alpha = inst.alpha
    report = validate_pairing(alpha)
    if not report.valid:
        raise InstanceError("pairing is not an involution: " + "; ".join(map(str, report.violations)))
    dom = pairing_domain(alpha)
    dens = density(dom)
    violations = _pair_violations(inst)

    finite = domain_is_finite(alpha)
    dom_size = density_prefix_count(dom, alpha.transient_length) if finite and alpha.transient_length else 0
    if finite and dom_size == 0:
        violations.append("empty domain: no transfer takes place")
    if variant == "PD" and not (finite and dom_size == 2):
        violations.append("PD needs exactly one transferring pair")
    if variant == "IPD" and finite:
        violations.append("IPD needs an infinite domain")
    if variant in ("APD", "sAPD") and dens.lower <= 0:
        violations.append("domain density is zero")
    if variant == "WPD" and not domain_is_everything(alpha):
        violations.append("WPD needs every generation paired")
    cert_step = None
    if variant in ("sGPD", "sAPD"):
        cert_step = alpha.h if step is None else step
        if cert_step % alpha.h:
            violations.append(f"pairing blocks of {alpha.h} do not fit declared step {cert_step}")
    return TransferCertificate(variant, inst, dens, cert_step, not violations, violations)


EpsRule = Union[Fraction, int, str, Callable[[int, int], Fraction]]


def apply_transfers(equal_target: Stream, alpha: PairingFunction, eps: EpsRule, alphabet: Optional[Alphabet] = None) -> TransferInstance:
    """Build the unequal stream whose transfers along ``alpha`` yield ``equal_target``.

    Each pair (k, p) with y_k < y_p is widened to (y_k - eps, y_p + eps).
    ``eps`` is a constant or a function of the pair (k, p), k < p; it is
    only queried within the first repeating pattern.
    """
    if alphabet is None:
        alphabet = equal_target.alphabet
    report = validate_pairing(alpha)
    if not report.valid:
        raise InstanceError("pairing is not an involution")
    if domain_is_finite(alpha) and not any(e is not None for t in alpha.block_preperiod for e in t):
        raise InstanceError("pairing has an empty domain")
    rule = eps if callable(eps) else (lambda k, p, _e=Fraction(eps): _e)
    h = alpha.h
    # round up to a block boundary so no pair straddles the pattern edge
    start = -(-max(equal_target.transient_length, alpha.transient_length) // h) * h
    length = lcm(equal_target.period_length, alpha.period_length)
    horizon = start + length
    out = [equal_target.value_at(k) for k in range(1, horizon + 1)]
    for k, p in alpha.pairs(horizon):
        yk, yp = out[k - 1], out[p - 1]
        if yk == yp:
            raise InstanceError(f"pair ({k}, {p}) has equal utilities; nothing to widen")
        e = Fraction(rule(k, p))
        if e <= 0:
            raise InstanceError(f"non-positive epsilon {e} at pair ({k}, {p})")
        lo, hi = (k, p) if yk < yp else (p, k)
        new_lo, new_hi = out[lo - 1] - e, out[hi - 1] + e
        if new_lo not in alphabet or new_hi not in alphabet:
            raise InstanceError(f"widened pair ({k}, {p}) leaves the alphabet")
        out[lo - 1], out[hi - 1] = new_lo, new_hi
    unequal = Stream.from_values(out[start:], out[:start], alphabet).canonical()
    return TransferInstance(unequal, equal_target.with_alphabet(alphabet) if equal_target.alphabet != alphabet else equal_target, alpha)


# -- anonymity -------------------------------------------------------------

@dataclass
class AnonymityReport:
    i: int
    j: int
    welfare_before: Fraction
    welfare_after: Fraction
    prefixes_checked: int
    prefix_mismatches: list[int]

    @property
    def holds(self) -> bool:
        return self.welfare_before == self.welfare_after and not self.prefix_mismatches


def check_anonymity(s: Stream, i: int, j: int, h: int = 1, extra: int = 100) -> AnonymityReport:
    """Compare W and every W_N with H_N >= max(i, j) before and after swapping i, j."""
    t = swap_coordinates(s, i, j)
    first = -(-max(i, j) // h)
    n_max = first + extra
    a = gini.w_prefix_trace(s, h, n_max)
    b = gini.w_prefix_trace(t, h, n_max)
    bad = [N for N in range(first, n_max + 1) if a[N - 1].raw_double_sum != b[N - 1].raw_double_sum]
    return AnonymityReport(i, j, gini.welfare_exact(s).value, gini.welfare_exact(t).value, n_max - first + 1, bad)


# -- quantitative bound ----------------------------------------------------

PROP1_FACTOR = Fraction(2, 5)


@dataclass(frozen=True)
class BoundRow:
    N: int
    H: int
    raw_x: Fraction
    raw_y: Fraction
    D: int
    eps: Optional[Fraction]
    bound: Fraction
    slack: Fraction

    @property
    def holds(self) -> bool:
        return self.slack >= 0


def prop1_bound_trace(inst: TransferInstance, n_max: int) -> list[BoundRow]:
    """Check raw_x >= raw_y + (2/5)*eps*D**2 at every horizon H_N = N*h, N <= n_max."""
    h = inst.alpha.h
    raws_x = gini._stream_raw_sums(inst.unequal, h, n_max)
    raws_y = gini._stream_raw_sums(inst.equal, h, n_max)
    dom = pairing_domain(inst.alpha)
    rows = []
    eps_min: Optional[Fraction] = None
    for N in range(1, n_max + 1):
        H = N * h
        for k in range(H - h + 1, H + 1):
            if inst.alpha.apply(k) is not None:
                e = inst.epsilon(k)
                eps_min = e if eps_min is None or e < eps_min else eps_min
        D = density_prefix_count(dom, H)
        extra = PROP1_FACTOR * eps_min * D * D if D else Fraction(0)
        bound = raws_y[N - 1] + extra
        rows.append(BoundRow(N, H, raws_x[N - 1], raws_y[N - 1], D, eps_min, bound, raws_x[N - 1] - bound))
    return rows


def prop1_bound_check(inst: TransferInstance, N: int) -> BoundRow:
    return prop1_bound_trace(inst, N)[-1]


def welfare_gap_bound(inst: TransferInstance) -> tuple[Fraction, Fraction]:
    """(W(equal) - W(unequal), (2/5) * min_gap * d**2) for the limit streams."""
    gap = gini.welfare_exact(inst.equal).value - gini.welfare_exact(inst.unequal).value
    d = density(pairing_domain(inst.alpha)).lower
    g = inst.alphabet.min_gap or Fraction(0)
    return gap, PROP1_FACTOR * g * d * d


# -- case analysis ---------------------------------------------------------

@dataclass
class Case4Report:
    x_sum: Fraction
    y_sum: Fraction
    eps_k: Fraction
    eps_j: Fraction

    @property
    def slack(self) -> Fraction:
        """x_sum - y_sum - 2*min(eps_j, eps_k)."""
        return self.x_sum - self.y_sum - 2 * min(self.eps_j, self.eps_k)

    @property
    def slack_eps_j(self) -> Fraction:
        return self.x_sum - self.y_sum - 2 * self.eps_j

    @property
    def holds(self) -> bool:
        return self.slack >= 0


def case4_inequality_check(y_k, eps_k, y_j, eps_j, y_ak, y_aj) -> Case4Report:
    """Five-combination comparison for two pairs in the rich/poor configuration.

    Generation k is the richer member of its pair and j the poorer:
    x_k = y_k + eps_k, x_ak = y_ak - eps_k, x_j = y_j - eps_j,
    x_aj = y_aj + eps_j.
    """
    y_k, eps_k, y_j, eps_j, y_ak, y_aj = map(Fraction, (y_k, eps_k, y_j, eps_j, y_ak, y_aj))
    if eps_k <= 0 or eps_j <= 0:
        raise InstanceError("transfer sizes must be positive")
    if not y_ak < y_k:
        raise InstanceError("pair k must have y_ak < y_k")
    if not y_j < y_aj:
        raise InstanceError("pair j must have y_j < y_aj")
    x_k, x_ak = y_k + eps_k, y_ak - eps_k
    x_j, x_aj = y_j - eps_j, y_aj + eps_j

    def five(k, ak, j, aj):
        return abs(k - j) + abs(k - aj) + abs(j - ak) + abs(ak - aj) + abs(j - aj)

    return Case4Report(five(x_k, x_ak, x_j, x_aj), five(y_k, y_ak, y_j, y_aj), eps_k, eps_j)


@dataclass
class Case4Scan:
    configurations: int
    violations: list[tuple]
    worst_slack: Optional[Fraction]
    violations_eps_j: int
    worst_ratio: Optional[Fraction]


def case4_scan(value_max: int, eps_max: int) -> Case4Scan:
    """Every case-4 configuration with all x and y values in 1..value_max."""
    if value_max < 2 or eps_max < 1:
        raise ValueError("need value_max >= 2 and eps_max >= 1")
    vals = range(1, value_max + 1)
    epss = range(1, eps_max + 1)
    count = 0
    violations = []
    worst = None
    worst_ratio = None
    bad_eps_j = 0
    for y_k, y_ak, y_j, y_aj, e_k, e_j in product(vals, vals, vals, vals, epss, epss):
        if not (y_ak < y_k and y_j < y_aj):
            continue
        if y_ak - e_k < 1 or y_k + e_k > value_max or y_j - e_j < 1 or y_aj + e_j > value_max:
            continue
        count += 1
        r = case4_inequality_check(y_k, e_k, y_j, e_j, y_ak, y_aj)
        if not r.holds:
            violations.append((y_k, e_k, y_j, e_j, y_ak, y_aj))
        if r.slack_eps_j < 0:
            bad_eps_j += 1
        worst = r.slack if worst is None or r.slack < worst else worst
        ratio = (r.x_sum - r.y_sum) / (2 * min(e_k, e_j))
        worst_ratio = ratio if worst_ratio is None or ratio < worst_ratio else worst_ratio
    return Case4Scan(count, violations, worst, bad_eps_j, worst_ratio)


@dataclass
class CaseDecomposition:
    H: int
    counts: dict[str, int]
    contributions: dict[str, Fraction]
    raw_difference: Fraction
    case1_failures: int
    case2_failures: int
    case3_exact: int
    case3_gain: int
    case3_loss: int
    case4_cross_min: Optional[Fraction]

    @property
    def reproduces_difference(self) -> bool:
        return sum(self.contributions.values()) == self.raw_difference

    @property
    def consistent(self) -> bool:
        return (
            self.reproduces_difference
            and self.case1_failures == 0
            and self.case2_failures == 0
            and self.case3_loss == 0
            and (self.case4_cross_min is None or self.case4_cross_min >= 0)
        )


def case_decomposition_check(inst: TransferInstance, N: int) -> CaseDecomposition:
    """Classify every ordered pair of generations in [1, N*h] and account for raw_x - raw_y.

    case1: partners; case2: both unpaired; case3: exactly one paired;
    case4: both paired but not partners; diagonal: k == j.
    Case-3 pairs are also checked in the grouped form
    |x_j - x_k| + |x_j - x_ak| versus the same for y, which is an
    equality only when x_j lies outside the widened interval.
    """
    H = N * inst.alpha.h
    if H > gini.NAIVE_LIMIT:
        raise ValueError(f"pair classification is capped at H <= {gini.NAIVE_LIMIT}")
    x = inst.unequal.prefix(H)
    y = inst.equal.prefix(H)
    part = [None] + [inst.alpha.apply(k) for k in range(1, H + 1)]
    names = ("diagonal", "case1", "case2", "case3", "case4")
    counts = dict.fromkeys(names, 0)
    contrib = {n: Fraction(0) for n in names}
    c1_bad = c2_bad = 0
    for k in range(1, H + 1):
        for j in range(1, H + 1):
            d = abs(x[k - 1] - x[j - 1]) - abs(y[k - 1] - y[j - 1])
            if k == j:
                name = "diagonal"
            elif part[k] == j:
                name = "case1"
                if d != 2 * abs(x[k - 1] - y[k - 1]):
                    c1_bad += 1
            elif part[k] is None and part[j] is None:
                name = "case2"
                if d != 0:
                    c2_bad += 1
            elif part[k] is None or part[j] is None:
                name = "case3"
            else:
                name = "case4"
            counts[name] += 1
            contrib[name] += d

    c3_exact = c3_gain = c3_loss = 0
    cross_min = None
    for k in range(1, H + 1):
        ak = part[k]
        if ak is None or ak < k:
            continue
        for j in range(1, H + 1):
            if part[j] is None:
                g = (abs(x[j - 1] - x[k - 1]) + abs(x[j - 1] - x[ak - 1])
                     - abs(y[j - 1] - y[k - 1]) - abs(y[j - 1] - y[ak - 1]))
                if g == 0:
                    c3_exact += 1
                elif g > 0:
                    c3_gain += 1
                else:
                    c3_loss += 1
            elif j > k and part[j] > j and j != ak:
                aj = part[j]
                cross = Fraction(0)
                for u in (k, ak):
                    for v in (j, aj):
                        cross += abs(x[u - 1] - x[v - 1]) - abs(y[u - 1] - y[v - 1])
                cross_min = cross if cross_min is None or cross < cross_min else cross_min

    raw_diff = gini.double_sum_fast(x) - gini.double_sum_fast(y)
    return CaseDecomposition(H, counts, contrib, raw_diff, c1_bad, c2_bad, c3_exact, c3_gain, c3_loss, cross_min)


# -- infinite-alphabet probe -----------------------------------------------

@dataclass(frozen=True)
class Prop2Row:
    k: int
    eps: Fraction
    w_unequal: Fraction
    w_equal: Fraction

    @property
    def gap(self) -> Fraction:
        return self.w_equal - self.w_unequal


def prop2_instance(k: int, h: int = 2) -> TransferInstance:
    """Unequal stream at 1/2 -+ 1/(k+1), equal stream at 1/2 -+ 1/(k+2), every block swapped."""
    half = Fraction(1, 2)
    lo, hi = half - Fraction(1, k + 2), half + Fraction(1, k + 2)
    equal = Stream.from_values([lo, hi] * (h // 2))
    e = Fraction(1, k + 1) - Fraction(1, k + 2)
    alphabet = Alphabet([lo - e, lo, hi, hi + e])
    return apply_transfers(equal, PairingFunction.all_swap(h), e, alphabet)


def prop2_probe(K: int, h: int = 2) -> list[Prop2Row]:
    if K < 1:
        raise ValueError("K must be at least 1")
    rows = []
    for k in range(1, K + 1):
        inst = prop2_instance(k, h)
        rows.append(Prop2Row(
            k,
            inst.epsilon(1),
            gini.welfare_exact(inst.unequal).value,
            gini.welfare_exact(inst.equal).value,
        ))
    return rows


# -- random instances ------------------------------------------------------

def _random_alphabet(rng: random.Random, max_size: int) -> Alphabet:
    den = rng.choice([1, 2, 3, 4, 6, 12])
    grid = [Fraction(t, den) for t in range(0, max(2 * den + 1, 9))]
    size = rng.randint(4, max(4, max_size))
    return Alphabet(sorted(rng.sample(grid, size)))


def _quadruples(alphabet: Alphabet) -> list[tuple[Fraction, Fraction, Fraction, Fraction]]:
    v = alphabet.values
    out = []
    for a in range(len(v)):
        for b in range(a + 1, len(v)):
            for c in range(b + 1, len(v)):
                for d in range(c + 1, len(v)):
                    if v[b] - v[a] == v[d] - v[c]:
                        out.append((v[a], v[b], v[c], v[d]))
    return out


def _random_table(rng: random.Random, h: int, p_pair: float) -> tuple:
    offs = list(range(h))
    rng.shuffle(offs)
    table: list = [None] * h
    for t in range(0, h - 1, 2):
        if rng.random() < p_pair:
            a, b = offs[t], offs[t + 1]
            table[a], table[b] = b, a
    return tuple(table)


def random_instance(rng: random.Random, max_h: int = 8, max_blocks: int = 6, max_alphabet: int = 6) -> TransferInstance:
    """A valid instance built equal-stream-first, then widened by apply_transfers.

    Roughly a quarter of the draws pair every generation.
    """
    while True:
        alphabet = _random_alphabet(rng, max_alphabet)
        quads = _quadruples(alphabet)
        if quads:
            break
    full = rng.random() < 0.25
    h = rng.choice([2, 4, 6, 8][: max(1, max_h // 2)]) if full else rng.randint(2, max_h)
    p_pair = 1.0 if full else rng.uniform(0.3, 1.0)
    pre = tuple(_random_table(rng, h, p_pair) for _ in range(rng.randint(0, 2)))
    per = [_random_table(rng, h, p_pair) for _ in range(rng.randint(1, max_blocks))]
    if all(e is None for t in per for e in t):
        per[0] = _random_table(rng, h, 1.0)
    alpha = PairingFunction(h, pre, tuple(per))

    start, length = alpha.transient_length, alpha.period_length
    horizon = start + length
    y: list = [None] * horizon
    eps: dict = {}
    for k, p in alpha.pairs(horizon):
        a, b, c, d = rng.choice(quads)
        if rng.random() < 0.5:
            y[k - 1], y[p - 1] = b, c
        else:
            y[k - 1], y[p - 1] = c, b
        eps[k] = b - a
    for k in range(horizon):
        if y[k] is None:
            y[k] = rng.choice(alphabet.values)
    equal = Stream.from_values(y[start:], y[:start], alphabet)
    return apply_transfers(equal, alpha, lambda k, p: eps[k], alphabet)


# -- JSON ------------------------------------------------------------------

def instance_to_json(inst: TransferInstance) -> dict:
    return {
        "unequal": stream_to_json(inst.unequal),
        "equal": stream_to_json(inst.equal),
        "pairing": pairing_to_json(inst.alpha),
    }


def instance_from_json(obj) -> TransferInstance:
    if not isinstance(obj, dict):
        raise ValueError("instance JSON must be an object")
    try:
        return TransferInstance(
            stream_from_json(obj["unequal"]),
            stream_from_json(obj["equal"]),
            pairing_from_json(obj["pairing"]),
        )
    except KeyError as exc:
        raise ValueError(f"instance JSON missing key {exc.args[0]!r}") from None
