"""Eventually periodic utility streams over finite rational alphabets.

Generations are 1-indexed: ``value_at(s, 1)`` is the first generation.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Sequence

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(token) -> Fraction:
    """Parse ``"p/q"``, ``"p"`` or a bare int. Floats and decimals are rejected."""
    if isinstance(token, bool):
        raise ValueError(f"not a rational: {token!r}")
    if isinstance(token, int):
        return Fraction(token)
    if isinstance(token, Fraction):
        return token
    if not isinstance(token, str):
        raise ValueError(f"not a rational: {token!r}")
    m = _RATIONAL_RE.match(token)
    if m is None:
        raise ValueError(f"not a rational: {token!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator: {token!r}")
    return Fraction(num, den)


def format_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


class Alphabet:
    """Finite, strictly increasing set of rational utility levels."""

    __slots__ = ("values", "_index")

    def __init__(self, values: Iterable):
        vals = tuple(parse_rational(v) for v in values)
        if not vals:
            raise ValueError("alphabet must be non-empty")
        for a, b in zip(vals, vals[1:]):
            if not a < b:
                raise ValueError("alphabet values must be strictly increasing")
        self.values = vals
        self._index = {v: i for i, v in enumerate(vals)}

    @classmethod
    def from_values(cls, values: Iterable) -> "Alphabet":
        """Build from any collection, sorting and dropping duplicates."""
        return cls(sorted({parse_rational(v) for v in values}))

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> Fraction:
        return self.values[i]

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.values)

    def __contains__(self, v) -> bool:
        return v in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self.values == other.values

    def __hash__(self) -> int:
        return hash(self.values)

    def __repr__(self) -> str:
        return f"Alphabet([{', '.join(str(v) for v in self.values)}])"

    def index(self, v) -> int:
        return self._index[Fraction(v)]

    @property
    def min_gap(self) -> Fraction | None:
        """Smallest difference between adjacent values; None for a singleton."""
        if len(self.values) < 2:
            return None
        return min(b - a for a, b in zip(self.values, self.values[1:]))

    @property
    def diameter(self) -> Fraction:
        return self.values[-1] - self.values[0]

    def union(self, other: "Alphabet") -> "Alphabet":
        return Alphabet.from_values(self.values + other.values)


def _primitive_period(seq: tuple) -> tuple:
    n = len(seq)
    for p in range(1, n + 1):
        if n % p == 0 and seq == seq[:p] * (n // p):
            return seq[:p]
    return seq


@dataclass(frozen=True, eq=False)
class Stream:
    """An eventually periodic stream ``pre + period + period + ...``.

    ``preperiod`` and ``period`` hold 0-based positions into ``alphabet``.
    """

    alphabet: Alphabet
    preperiod: tuple[int, ...]
    period: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "preperiod", tuple(int(i) for i in self.preperiod))
        object.__setattr__(self, "period", tuple(int(i) for i in self.period))
        if not self.period:
            raise ValueError("period must be non-empty")
        m = len(self.alphabet)
        for i in self.preperiod + self.period:
            if not 0 <= i < m:
                raise ValueError(f"alphabet index {i} out of range for alphabet of size {m}")

    @classmethod
    def from_values(cls, period: Sequence, preperiod: Sequence = (), alphabet=None) -> "Stream":
        """Build a stream from utility values rather than alphabet positions."""
        per = [parse_rational(v) for v in period]
        pre = [parse_rational(v) for v in preperiod]
        if alphabet is None:
            alphabet = Alphabet.from_values(per + pre)
        elif not isinstance(alphabet, Alphabet):
            alphabet = Alphabet(alphabet)
        try:
            return cls(alphabet, tuple(alphabet.index(v) for v in pre), tuple(alphabet.index(v) for v in per))
        except KeyError as exc:
            raise ValueError(f"value {exc.args[0]} not in alphabet") from None

    @classmethod
    def constant(cls, value) -> "Stream":
        return cls.from_values([value])

    def __len__(self):
        raise TypeError("streams are infinite")

    def index_at(self, n: int) -> int:
        if n < 1:
            raise ValueError(f"generations are 1-indexed, got n={n}")
        q = len(self.preperiod)
        if n <= q:
            return self.preperiod[n - 1]
        return self.period[(n - q - 1) % len(self.period)]

    def value_at(self, n: int) -> Fraction:
        return self.alphabet[self.index_at(n)]

    def prefix(self, n: int) -> list[Fraction]:
        if n < 1:
            raise ValueError(f"prefix length must be positive, got {n}")
        return [self.value_at(k) for k in range(1, n + 1)]

    def prefix_indices(self, n: int) -> list[int]:
        q, p = len(self.preperiod), len(self.period)
        if n <= q:
            return list(self.preperiod[:n])
        reps, rem = divmod(n - q, p)
        return list(self.preperiod) + list(self.period) * reps + list(self.period[:rem])

    def values(self) -> Iterator[Fraction]:
        """Infinite iterator over x_1, x_2, ..."""
        a = self.alphabet
        for i in self.preperiod:
            yield a[i]
        while True:
            for i in self.period:
                yield a[i]

    @property
    def transient_length(self) -> int:
        return len(self.preperiod)

    @property
    def period_length(self) -> int:
        return len(self.period)

    def canonical(self) -> "Stream":
        """Shortest preperiod and primitive period with the same values."""
        pre = list(self.preperiod)
        per = list(_primitive_period(self.period))
        while pre and pre[-1] == per[-1]:
            pre.pop()
            per = per[-1:] + per[:-1]
        return Stream(self.alphabet, tuple(pre), tuple(per))

    def _key(self):
        c = self.canonical()
        a = c.alphabet
        return tuple(a[i] for i in c.preperiod), tuple(a[i] for i in c.period)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Stream):
            return NotImplemented
        horizon = (
            len(self.preperiod) + len(other.preperiod)
            + 2 * lcm(len(self.period), len(other.period))
        )
        return all(self.value_at(n) == other.value_at(n) for n in range(1, horizon + 1))

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        a = self.alphabet
        pre = ", ".join(str(a[i]) for i in self.preperiod)
        per = ", ".join(str(a[i]) for i in self.period)
        return f"Stream(<{pre}> ({per})*)"

    def with_alphabet(self, alphabet: Alphabet) -> "Stream":
        """Re-express over a larger alphabet containing every used value."""
        a = self.alphabet
        return Stream(
            alphabet,
            tuple(alphabet.index(a[i]) for i in self.preperiod),
            tuple(alphabet.index(a[i]) for i in self.period),
        )

    def affine(self, scale=1, shift=0) -> "Stream":
        """Stream of ``scale * x_n + shift``; ``scale`` must be positive."""
        scale, shift = Fraction(scale), Fraction(shift)
        if scale <= 0:
            raise ValueError("scale must be positive")
        return Stream(Alphabet(scale * v + shift for v in self.alphabet), self.preperiod, self.period)


def value_at(s: Stream, n: int) -> Fraction:
    return s.value_at(n)


def prefix(s: Stream, n: int) -> list[Fraction]:
    return s.prefix(n)


def frequencies(s: Stream) -> dict[Fraction, Fraction]:
    """Asymptotic frequency of each value, read off one period.

    Values that never occur in the period are omitted, so two streams
    with the same limiting distribution compare equal here.
    """
    counts: dict[int, int] = {}
    for i in s.period:
        counts[i] = counts.get(i, 0) + 1
    p = len(s.period)
    return {s.alphabet[i]: Fraction(c, p) for i, c in sorted(counts.items())}


def swap_coordinates(s: Stream, i: int, j: int) -> Stream:
    """Exchange generations i and j.

    The preperiod is unrolled to cover ``max(i, j)``; the tail keeps the
    original period, rotated to stay in phase.
    """
    if i < 1 or j < 1:
        raise ValueError("generations are 1-indexed")
    if i == j:
        raise ValueError("swap needs two distinct generations")
    m = max(i, j, len(s.preperiod))
    pre = [s.index_at(n) for n in range(1, m + 1)]
    pre[i - 1], pre[j - 1] = pre[j - 1], pre[i - 1]
    p = len(s.period)
    period = tuple(s.index_at(m + 1 + t) for t in range(p))
    return Stream(s.alphabet, tuple(pre), period)


def power_sparse_values(base: int = 10, hit=1, miss=4) -> Iterator[Fraction]:
    """Infinite stream equal to ``hit`` at base**k (k >= 1) and ``miss`` elsewhere."""
    hit, miss = parse_rational(hit), parse_rational(miss)
    nxt = base
    n = 0
    while True:
        n += 1
        if n == nxt:
            nxt *= base
            yield hit
        else:
            yield miss


# -- JSON ------------------------------------------------------------------

def stream_to_json(s: Stream) -> dict:
    return {
        "alphabet": [format_rational(v) for v in s.alphabet],
        "preperiod": list(s.preperiod),
        "period": list(s.period),
    }


def _index_list(obj, name: str) -> tuple[int, ...]:
    if not isinstance(obj, list):
        raise ValueError(f"{name} must be a list")
    for i in obj:
        if isinstance(i, bool) or not isinstance(i, int):
            raise ValueError(f"{name} entries must be integers, got {i!r}")
    return tuple(obj)


def stream_from_json(obj) -> Stream:
    if not isinstance(obj, dict):
        raise ValueError("stream JSON must be an object")
    try:
        alphabet = obj["alphabet"]
        period = obj["period"]
    except KeyError as exc:
        raise ValueError(f"stream JSON missing key {exc.args[0]!r}") from None
    if not isinstance(alphabet, list):
        raise ValueError("alphabet must be a list")
    return Stream(
        Alphabet(parse_rational(v) for v in alphabet),
        _index_list(obj.get("preperiod", []), "preperiod"),
        _index_list(period, "period"),
    )
