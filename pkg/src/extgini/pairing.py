"""Index sets with exact asymptotic densities, and fixed-step pairing functions.

A pairing function here is a partial involution on the generations that
never leaves its block ``((n-1)h, nh]``. Blocks are described by partner
tables using 0-based offsets; the public API speaks 1-based generations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

Table = tuple[Optional[int], ...]


# -- index sets ------------------------------------------------------------

@dataclass(frozen=True)
class PeriodicSet:
    """Indicator ``preperiod + period + period + ...`` over 1, 2, ..."""

    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "preperiod", tuple(self.preperiod))
        object.__setattr__(self, "period", tuple(self.period))
        if not self.period:
            raise ValueError("indicator period must be non-empty")
        if any(b not in (0, 1) for b in self.preperiod + self.period):
            raise ValueError("indicator entries must be 0 or 1")

    def __contains__(self, n: int) -> bool:
        q = len(self.preperiod)
        if n < 1:
            return False
        if n <= q:
            return bool(self.preperiod[n - 1])
        return bool(self.period[(n - q - 1) % len(self.period)])


@dataclass(frozen=True)
class FiniteSet:
    members: tuple[int, ...]

    def __post_init__(self):
        m = tuple(self.members)
        object.__setattr__(self, "members", m)
        if any(a >= b for a, b in zip(m, m[1:])) or (m and m[0] < 1):
            raise ValueError("members must be strictly increasing positive integers")

    def __contains__(self, n: int) -> bool:
        return n in set(self.members)


@dataclass(frozen=True)
class PowerSet:
    """The set ``{base**k : k >= 1}``."""

    base: int

    def __post_init__(self):
        if self.base < 2:
            raise ValueError("base must be at least 2")

    def __contains__(self, n: int) -> bool:
        if n < self.base:
            return False
        while n % self.base == 0:
            n //= self.base
        return n == 1


IndexSet = Union[PeriodicSet, FiniteSet, PowerSet]


@dataclass(frozen=True)
class DensityPair:
    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if not 0 <= self.lower <= self.upper <= 1:
            raise ValueError(f"invalid density pair ({self.lower}, {self.upper})")

    @property
    def exact(self) -> Optional[Fraction]:
        """The asymptotic density when lower and upper agree."""
        return self.lower if self.lower == self.upper else None


def density(s: IndexSet) -> DensityPair:
    if isinstance(s, PeriodicSet):
        d = Fraction(sum(s.period), len(s.period))
        return DensityPair(d, d)
    if isinstance(s, (FiniteSet, PowerSet)):
        # |S ∩ [1, n]| is bounded (finite) or logarithmic (powers), so o(n)
        return DensityPair(Fraction(0), Fraction(0))
    raise TypeError(f"unsupported index set {type(s).__name__}")


def density_prefix_count(s: IndexSet, n: int) -> int:
    """Exact ``|S ∩ [1, n]|``."""
    if n < 1:
        raise ValueError("n must be positive")
    if isinstance(s, PeriodicSet):
        q = len(s.preperiod)
        if n <= q:
            return sum(s.preperiod[:n])
        reps, rem = divmod(n - q, len(s.period))
        return sum(s.preperiod) + reps * sum(s.period) + sum(s.period[:rem])
    if isinstance(s, FiniteSet):
        return sum(1 for m in s.members if m <= n)
    if isinstance(s, PowerSet):
        count, p = 0, s.base
        while p <= n:
            count += 1
            p *= s.base
        return count
    raise TypeError(f"unsupported index set {type(s).__name__}")


# -- pairing functions -----------------------------------------------------

@dataclass(frozen=True)
class Violation:
    block: int
    offset: int
    reason: str

    def __str__(self):
        return f"block {self.block} offset {self.offset}: {self.reason}"


@dataclass
class PairingReport:
    valid: bool
    violations: list[Violation] = field(default_factory=list)


def _as_table(t: Sequence, h: int) -> Table:
    t = tuple(t)
    if len(t) != h:
        raise ValueError(f"block table has length {len(t)}, expected step {h}")
    for e in t:
        if e is None:
            continue
        if isinstance(e, bool) or not isinstance(e, int) or not 0 <= e < h:
            raise ValueError(f"partner offset {e!r} outside 0..{h - 1}")
    return t


@dataclass(frozen=True)
class PairingFunction:
    """Block-periodic fixed-step pairing with step ``h``.

    Block n (1-based) covers generations ((n-1)h, nh]. The first
    ``len(block_preperiod)`` blocks use those tables; afterwards the
    tables in ``block_period`` repeat.
    """

    h: int
    block_preperiod: tuple[Table, ...]
    block_period: tuple[Table, ...]

    def __post_init__(self):
        if isinstance(self.h, bool) or not isinstance(self.h, int) or self.h < 1:
            raise ValueError("step h must be a positive integer")
        object.__setattr__(self, "block_preperiod", tuple(_as_table(t, self.h) for t in self.block_preperiod))
        object.__setattr__(self, "block_period", tuple(_as_table(t, self.h) for t in self.block_period))
        if not self.block_period:
            raise ValueError("block_period must be non-empty")

    @classmethod
    def uniform(cls, table: Sequence) -> "PairingFunction":
        """Every block uses the same table."""
        return cls(len(table), (), (tuple(table),))

    @classmethod
    def all_swap(cls, h: int = 2) -> "PairingFunction":
        """Adjacent offsets swapped in every block; h must be even."""
        if h % 2:
            raise ValueError("all-swap needs an even step")
        table = []
        for m in range(h):
            table.append(m + 1 if m % 2 == 0 else m - 1)
        return cls.uniform(table)

    def block_table(self, block: int) -> Table:
        """Table of the 1-based block number ``block``."""
        q = len(self.block_preperiod)
        if block <= q:
            return self.block_preperiod[block - 1]
        return self.block_period[(block - q - 1) % len(self.block_period)]

    def apply(self, k: int) -> Optional[int]:
        """Partner of generation k, or None when k is unpaired."""
        if k < 1:
            raise ValueError("generations are 1-indexed")
        block, off = divmod(k - 1, self.h)
        partner = self.block_table(block + 1)[off]
        if partner is None:
            return None
        return block * self.h + partner + 1

    @property
    def transient_length(self) -> int:
        return self.h * len(self.block_preperiod)

    @property
    def period_length(self) -> int:
        return self.h * len(self.block_period)

    def pairs(self, limit: int):
        """Pairs (k, partner) with k < partner <= limit."""
        for k in range(1, limit + 1):
            p = self.apply(k)
            if p is not None and k < p <= limit:
                yield k, p


def apply(alpha: PairingFunction, k: int) -> Optional[int]:
    return alpha.apply(k)


def validate_pairing(alpha: PairingFunction) -> PairingReport:
    """Check the involution property block by block.

    Fixed points are reported as violations: a generation paired with
    itself cannot take part in any transfer.
    """
    violations = []
    blocks = list(alpha.block_preperiod) + list(alpha.block_period)
    for b, table in enumerate(blocks, start=1):
        for m, p in enumerate(table):
            if p is None:
                continue
            if p == m:
                violations.append(Violation(b, m, "fixed point"))
            elif table[p] != m:
                violations.append(Violation(b, m, f"table[{p}] is {table[p]}, expected {m}"))
    return PairingReport(not violations, violations)


def pairing_domain(alpha: PairingFunction) -> PeriodicSet:
    def ind(tables):
        return tuple(0 if e is None else 1 for t in tables for e in t)

    return PeriodicSet(ind(alpha.block_preperiod), ind(alpha.block_period))


def domain_is_finite(alpha: PairingFunction) -> bool:
    return all(e is None for t in alpha.block_period for e in t)


def domain_is_everything(alpha: PairingFunction) -> bool:
    return all(e is not None for t in alpha.block_preperiod + alpha.block_period for e in t)


@dataclass(frozen=True)
class ExplicitPairing:
    """Finite pairing given by an explicit partner map.

    Only for demonstrations of pairings whose displacement is unbounded,
    which have no block-periodic form.
    """

    partners: dict

    def apply(self, k: int) -> Optional[int]:
        return self.partners.get(k)

    def validate(self) -> PairingReport:
        violations = []
        for k, p in sorted(self.partners.items()):
            if k == p:
                violations.append(Violation(0, k, "fixed point"))
            elif self.partners.get(p) != k:
                violations.append(Violation(0, k, f"partner {p} does not map back"))
        return PairingReport(not violations, violations)

    def max_displacement(self) -> int:
        return max((abs(k - p) for k, p in self.partners.items()), default=0)


def sparse_power_pairing(base: int = 10, k_max: int = 5) -> ExplicitPairing:
    """Pair base**k with 2*base**k for k = 1..k_max; displacement grows without bound."""
    partners = {}
    for k in range(1, k_max + 1):
        a = base**k
        partners[a] = 2 * a
        partners[2 * a] = a
    return ExplicitPairing(partners)


# -- JSON ------------------------------------------------------------------

def pairing_to_json(alpha: PairingFunction) -> dict:
    return {
        "h": alpha.h,
        "block_preperiod": [list(t) for t in alpha.block_preperiod],
        "block_period": [list(t) for t in alpha.block_period],
    }


def pairing_from_json(obj) -> PairingFunction:
    if not isinstance(obj, dict):
        raise ValueError("pairing JSON must be an object")
    try:
        h = obj["h"]
        period = obj["block_period"]
    except KeyError as exc:
        raise ValueError(f"pairing JSON missing key {exc.args[0]!r}") from None
    pre = obj.get("block_preperiod", [])
    for name, blocks in (("block_preperiod", pre), ("block_period", period)):
        if not isinstance(blocks, list) or not all(isinstance(t, list) for t in blocks):
            raise ValueError(f"{name} must be a list of lists")
    return PairingFunction(h, tuple(tuple(t) for t in pre), tuple(tuple(t) for t in period))
