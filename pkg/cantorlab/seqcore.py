"""
Exact representations of points of binary sequence space.

A Point is an eventually-periodic infinite binary sequence written as a
finite preperiod followed by a repeating period. Points are sequences, not
reals: `0:1` (0111...) and `1:0` (1000...) are distinct Points with the same
real value, and only `to_dyadic_pair` / `midpoint` look at real values.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Iterable, Optional, Sequence, Tuple, Union

from .errors import InvalidIntervalError, MalformedInputError, NoPredecessorError, PreconditionError

logger = logging.getLogger(__name__)

# Finite words are plain strings over "0"/"1"; the empty word is the root cylinder.
BitWord = str


class Order(Enum):
    LT = -1
    EQ = 0
    GT = 1


def as_bitword(value: Union[str, Sequence[int]]) -> BitWord:
    """Validate (or convert from a 0/1 sequence) a finite binary word."""
    if not isinstance(value, str):
        try:
            value = "".join(str(int(bit)) for bit in value)
        except (TypeError, ValueError) as exc:
            raise MalformedInputError(f"Not a binary word: {value!r}") from exc
    if any(ch not in "01" for ch in value):
        raise MalformedInputError(f"Not a binary word: {value!r}")
    return value


def _shortest_unit(word: BitWord) -> BitWord:
    size = len(word)
    for p in range(1, size + 1):
        if size % p == 0 and word[:p] * (size // p) == word:
            return word[:p]
    return word


def _canonical_parts(preperiod: BitWord, period: BitWord) -> Tuple[BitWord, BitWord]:
    pre = as_bitword(preperiod)
    per = as_bitword(period)
    if not per:
        raise MalformedInputError("Point period must be nonempty")
    per = _shortest_unit(per)
    # Absorb preperiod bits that continue the cycle backwards.
    while pre and pre[-1] == per[-1]:
        pre = pre[:-1]
        per = per[-1] + per[:-1]
    return pre, per


@dataclass(frozen=True)
class Point:
    """Eventually-periodic binary sequence, always held in canonical form."""

    preperiod: BitWord
    period: BitWord

    def __post_init__(self) -> None:
        pre, per = _canonical_parts(self.preperiod, self.period)
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    @classmethod
    def parse(cls, text: str) -> "Point":
        """Parse the `pre:period` encoding, e.g. `01:1` for 0111..."""
        if not isinstance(text, str) or text.count(":") != 1:
            raise MalformedInputError(f"Point text must look like 'pre:period', got {text!r}")
        pre, per = text.strip().split(":")
        return cls(pre, per)

    def __str__(self) -> str:
        return f"{self.preperiod}:{self.period}"

    @property
    def resolution(self) -> int:
        return len(self.preperiod) + len(self.period)

    def bit(self, idx: int) -> int:
        return bit_at(self, idx)

    def prefix(self, length: int) -> BitWord:
        return "".join(str(bit_at(self, i)) for i in range(length))

    def is_terminating(self) -> bool:
        return self.period == "0"

    def expand(self, length: int) -> str:
        """Human-readable expansion, e.g. `0111...`."""
        return self.prefix(length) + "..."


def canonicalize(raw_preperiod: BitWord, raw_period: BitWord) -> Point:
    return Point(raw_preperiod, raw_period)


def bit_at(p: Point, idx: int) -> int:
    if idx < 0:
        raise MalformedInputError(f"Bit index must be non-negative, got {idx}")
    pre = p.preperiod
    if idx < len(pre):
        return int(pre[idx])
    return int(p.period[(idx - len(pre)) % len(p.period)])


def comparison_window(x: Point, y: Point) -> int:
    """Number of leading bits that decide equality of two Points."""
    return max(len(x.preperiod), len(y.preperiod)) + lcm(len(x.period), len(y.period))


def first_disagreement(x: Point, y: Point) -> Optional[int]:
    if x == y:
        return None
    for i in range(comparison_window(x, y)):
        if bit_at(x, i) != bit_at(y, i):
            return i
    return None


def compare_lex(x: Point, y: Point) -> Order:
    idx = first_disagreement(x, y)
    if idx is None:
        return Order.EQ
    return Order.LT if bit_at(x, idx) < bit_at(y, idx) else Order.GT


def subset_le(x: Point, y: Point) -> bool:
    """Bitwise inclusion of characteristic sequences: x_i <= y_i everywhere."""
    return all(bit_at(x, i) <= bit_at(y, i) for i in range(comparison_window(x, y)))


def to_dyadic_pair(p: Point) -> Tuple[Fraction, bool]:
    """Exact real value sum(bit_i * 2^-(i+1)); eventually periodic, hence rational."""
    pre_len = len(p.preperiod)
    head = int(p.preperiod, 2) if p.preperiod else 0
    cycle = int(p.period, 2)
    value = Fraction(head, 2**pre_len) + Fraction(cycle, (2 ** len(p.period) - 1) * 2**pre_len)
    return value, True


def value_of(p: Point) -> Fraction:
    return to_dyadic_pair(p)[0]


def from_rational(value: Union[Fraction, int]) -> Point:
    """
    Render q in [0, 1] as a Point by binary long division.

    Terminating expansions end in period 0; 1 itself is rendered as `:1`.
    """
    q = Fraction(value)
    if q < 0 or q > 1:
        raise MalformedInputError(f"Only values in [0, 1] have a Point rendering, got {q}")
    if q == 1:
        return Point("", "1")
    num, den = q.numerator, q.denominator
    digits = []
    seen = {}
    while num and num not in seen:
        seen[num] = len(digits)
        num *= 2
        if num >= den:
            digits.append("1")
            num -= den
        else:
            digits.append("0")
    if num == 0:
        return Point("".join(digits), "0")
    start = seen[num]
    return Point("".join(digits[:start]), "".join(digits[start:]))


def midpoint(a: Point, b: Point) -> Point:
    if compare_lex(a, b) is not Order.LT:
        raise InvalidIntervalError(f"midpoint needs a < b lexicographically, got a={a} b={b}")
    return from_rational((value_of(a) + value_of(b)) / 2)


@dataclass(frozen=True)
class Dyadic:
    """numerator / 2**exponent, reduced (numerator odd or zero)."""

    numerator: int
    exponent: int

    def __post_init__(self) -> None:
        if self.numerator < 0 or self.exponent < 0:
            raise MalformedInputError(f"Dyadic parts must be non-negative: {self.numerator}/2^{self.exponent}")
        num, exp = self.numerator, self.exponent
        if num == 0:
            exp = 0
        while exp and num % 2 == 0:
            num //= 2
            exp -= 1
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "exponent", exp)

    @classmethod
    def from_fraction(cls, value: Fraction) -> "Dyadic":
        den = value.denominator
        if den & (den - 1):
            raise MalformedInputError(f"{value} is not a dyadic rational")
        return cls(value.numerator, den.bit_length() - 1)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, 2**self.exponent)

    def __str__(self) -> str:
        return f"{self.numerator}/2^{self.exponent}"


def to_dyadic(p: Point) -> Optional[Dyadic]:
    """Dyadic value of a terminating Point, None for every other Point."""
    if not p.is_terminating():
        return None
    return Dyadic(int(p.preperiod, 2) if p.preperiod else 0, len(p.preperiod))


def natural_point(n: int) -> Point:
    """Code the natural number n as n ones followed by zeros."""
    if n < 0:
        raise MalformedInputError(f"Natural numbers are non-negative, got {n}")
    return Point("1" * n, "0")


def point_natural(p: Point) -> Optional[int]:
    if p.period == "0" and set(p.preperiod) <= {"1"}:
        return len(p.preperiod)
    return None


def random_point(rng: random.Random, max_resolution: int) -> Point:
    """Uniformly sized random Point with resolution <= max_resolution (before canonicalization)."""
    if max_resolution < 1:
        raise PreconditionError("max_resolution must be at least 1")
    period_len = rng.randint(1, max_resolution)
    pre_len = rng.randint(0, max_resolution - period_len)
    pre = "".join(rng.choice("01") for _ in range(pre_len))
    per = "".join(rng.choice("01") for _ in range(period_len))
    return Point(pre, per)


def enumerate_points(max_resolution: int) -> Iterable[Point]:
    """Every distinct Point whose canonical resolution is at most max_resolution."""
    seen = set()
    for total in range(1, max_resolution + 1):
        for period_len in range(1, total + 1):
            pre_len = total - period_len
            for pre in product("01", repeat=pre_len):
                for per in product("01", repeat=period_len):
                    p = Point("".join(pre), "".join(per))
                    if p not in seen:
                        seen.add(p)
                        yield p


@dataclass(frozen=True, order=True)
class OrdinalIndex:
    """The ordinal ω·limit_part + finite_part."""

    limit_part: int
    finite_part: int

    def __post_init__(self) -> None:
        if self.limit_part < 0 or self.finite_part < 0:
            raise MalformedInputError(f"Ordinal parts must be non-negative: ({self.limit_part},{self.finite_part})")

    @classmethod
    def parse(cls, text: str) -> "OrdinalIndex":
        body = text.strip()
        if not (body.startswith("(") and body.endswith(")")) or body.count(",") != 1:
            raise MalformedInputError(f"Ordinal text must look like '(q,n)', got {text!r}")
        q, n = body[1:-1].split(",")
        try:
            return cls(int(q), int(n))
        except ValueError as exc:
            raise MalformedInputError(f"Ordinal text must look like '(q,n)', got {text!r}") from exc

    def __str__(self) -> str:
        return f"({self.limit_part},{self.finite_part})"

    def omega_form(self) -> str:
        if self.limit_part == 0:
            return str(self.finite_part)
        head = "ω" if self.limit_part == 1 else f"ω·{self.limit_part}"
        return head if self.finite_part == 0 else f"{head}+{self.finite_part}"

    def is_successor(self) -> bool:
        return self.finite_part >= 1

    def is_limit(self) -> bool:
        return self.finite_part == 0 and self.limit_part >= 1

    def check_bound(self, k_bound: int) -> "OrdinalIndex":
        if self.limit_part > k_bound:
            raise PreconditionError(f"Ordinal {self.omega_form()} is beyond the bound ω·{k_bound}")
        return self

    def successor(self) -> "OrdinalIndex":
        return OrdinalIndex(self.limit_part, self.finite_part + 1)


def ord_pred(idx: OrdinalIndex) -> OrdinalIndex:
    if not idx.is_successor():
        raise NoPredecessorError(f"{idx.omega_form()} has no predecessor")
    return OrdinalIndex(idx.limit_part, idx.finite_part - 1)


ZERO_POINT = Point("", "0")


@dataclass(frozen=True)
class TransfinitePoint:
    """A sequence of length ω·K: block q holds the bits at positions ω·q + n."""

    blocks: Tuple[Point, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "blocks", tuple(self.blocks))
        if not self.blocks:
            raise MalformedInputError("A transfinite point needs at least one block")

    @classmethod
    def from_point(cls, p: Point, k: int) -> "TransfinitePoint":
        """Block-0-only point: p followed by K-1 zero blocks."""
        return cls((p,) + (ZERO_POINT,) * (k - 1))

    @classmethod
    def parse(cls, text: str) -> "TransfinitePoint":
        return cls(tuple(Point.parse(part) for part in text.split("|")))

    def __str__(self) -> str:
        return "|".join(str(b) for b in self.blocks)

    @property
    def k(self) -> int:
        return len(self.blocks)

    def bit_at(self, idx: OrdinalIndex) -> int:
        if idx.limit_part >= self.k:
            raise PreconditionError(f"{idx.omega_form()} is beyond this point's length ω·{self.k}")
        return bit_at(self.blocks[idx.limit_part], idx.finite_part)

    def first_disagreement(self, other: "TransfinitePoint") -> Optional[OrdinalIndex]:
        if self.k != other.k:
            raise PreconditionError(f"Block counts differ: {self.k} vs {other.k}")
        for q, (mine, theirs) in enumerate(zip(self.blocks, other.blocks)):
            idx = first_disagreement(mine, theirs)
            if idx is not None:
                return OrdinalIndex(q, idx)
        return None
