"""
Distances on sequence spaces.

Finite sequences (Points) get the exact rational distance 2^-n, n being the
1-based height of the lowest node where the two sequences part. Sequences of
length ω·K get a FormalDistance: a carry-normalized set of ordinal positions,
each standing for a single 1 digit at that position.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import FrozenSet, Iterable, List, Optional

from .cantortrie import CylinderComplex, cylinder
from .errors import LimitCarryError, MalformedInputError, MetricAxiomViolation, PreconditionError
from .seqcore import OrdinalIndex, Order, Point, TransfinitePoint, first_disagreement

logger = logging.getLogger(__name__)


def _carry(counts: Counter) -> FrozenSet[OrdinalIndex]:
    counts = Counter({pos: n for pos, n in counts.items() if n > 0})
    while True:
        duplicated = [pos for pos, n in counts.items() if n >= 2]
        if not duplicated:
            return frozenset(counts)
        pos = max(duplicated)
        if not pos.is_successor():
            raise LimitCarryError(f"Carry out of {pos.omega_form()} is undefined")
        pairs, rest = divmod(counts[pos], 2)
        if rest:
            counts[pos] = rest
        else:
            del counts[pos]
        counts[OrdinalIndex(pos.limit_part, pos.finite_part - 1)] += pairs


@dataclass(frozen=True)
class FormalDistance:
    """Σ 1_α over `positions`; no position appears twice."""

    positions: FrozenSet[OrdinalIndex] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "positions", frozenset(self.positions))

    @classmethod
    def from_positions(cls, positions: Iterable[OrdinalIndex]) -> "FormalDistance":
        return cls(_carry(Counter(positions)))

    @classmethod
    def unit(cls, pos: OrdinalIndex) -> "FormalDistance":
        return cls(frozenset([pos]))

    @classmethod
    def parse(cls, text: str) -> "FormalDistance":
        body = text.strip()
        if body == "0":
            return ZERO
        positions: List[OrdinalIndex] = []
        for term in body.split("+"):
            coeff, sep, pos = term.strip().partition("@")
            if coeff != "1" or not sep:
                raise MalformedInputError(f"Formal distance terms look like '1@(q,n)', got {term!r}")
            positions.append(OrdinalIndex.parse(pos))
        return cls.from_positions(positions)

    def sorted_positions(self) -> List[OrdinalIndex]:
        return sorted(self.positions)

    @property
    def is_zero(self) -> bool:
        return not self.positions

    def leading(self) -> Optional[OrdinalIndex]:
        return min(self.positions) if self.positions else None

    def to_fraction(self) -> Fraction:
        """Rational value Σ 2^-n; only defined while every position lies in block 0."""
        if any(pos.limit_part for pos in self.positions):
            raise PreconditionError(f"{self} has positions at or beyond ω and no rational value")
        return sum((Fraction(1, 2**pos.finite_part) for pos in self.positions), Fraction(0))

    def __str__(self) -> str:
        if not self.positions:
            return "0"
        return "+".join(f"1@{pos}" for pos in self.sorted_positions())


ZERO = FormalDistance()


def distance(x: Point, y: Point) -> Fraction:
    height = node_height(x, y)
    return Fraction(0) if height is None else Fraction(1, 2**height)


def node_height(x: Point, y: Point) -> Optional[int]:
    """1-based height of the node where x and y part, or None when equal."""
    idx = first_disagreement(x, y)
    return None if idx is None else idx + 1


def split_position(x: TransfinitePoint, y: TransfinitePoint) -> Optional[OrdinalIndex]:
    idx = x.first_disagreement(y)
    return None if idx is None else idx.successor()


def distance_transfinite(x: TransfinitePoint, y: TransfinitePoint) -> FormalDistance:
    pos = split_position(x, y)
    return ZERO if pos is None else FormalDistance.unit(pos)


def oplus(a: FormalDistance, b: FormalDistance) -> FormalDistance:
    counts = Counter(a.positions)
    counts.update(b.positions)
    return FormalDistance(_carry(counts))


def fd_compare(a: FormalDistance, b: FormalDistance) -> Order:
    left, right = a.sorted_positions(), b.sorted_positions()
    for mine, theirs in zip(left, right):
        if mine != theirs:
            return Order.GT if mine < theirs else Order.LT
    if len(left) == len(right):
        return Order.EQ
    return Order.GT if len(left) > len(right) else Order.LT


class TriangleCase(Enum):
    CASE1 = "Case1"
    CASE2 = "Case2"
    CASE3 = "Case3"
    CASE4 = "Case4"
    DEGENERATE = "Degenerate"


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise MetricAxiomViolation(message)


def triangle_case(x: TransfinitePoint, y: TransfinitePoint, z: TransfinitePoint) -> TriangleCase:
    """
    Classify a triple by how its split positions compare, checking the identity
    each case promises plus the formal triangle inequality.
    """
    a_xy, a_xz, a_yz = split_position(x, y), split_position(x, z), split_position(y, z)

    if a_xy is None and a_xz is None:
        _require(a_yz is None, "x = y and x = z but y != z")
        return TriangleCase.DEGENERATE
    if a_xy is None:
        _require(a_xz == a_yz, f"x = y but α(x,z)={a_xz} differs from α(y,z)={a_yz}")
        case = TriangleCase.CASE4
    elif a_xz is None:
        _require(a_xy == a_yz, f"x = z but α(x,y)={a_xy} differs from α(y,z)={a_yz}")
        case = TriangleCase.CASE4
    elif a_yz is None:
        _require(a_xy == a_xz, f"y = z but α(x,y)={a_xy} differs from α(x,z)={a_xz}")
        case = TriangleCase.CASE4
    elif a_xz > a_xy:
        _require(a_yz == a_xy, f"α(x,z) > α(x,y) but α(y,z)={a_yz} != α(x,y)={a_xy}")
        case = TriangleCase.CASE1
    elif a_xz < a_xy:
        _require(a_yz == a_xz, f"α(x,z) < α(x,y) but α(y,z)={a_yz} != α(x,z)={a_xz}")
        case = TriangleCase.CASE2
    else:
        # Binary branching: both leave x at the same node, so y and z take the same side there.
        _require(a_yz > a_xz, f"α(x,z) = α(x,y) but α(y,z)={a_yz} is not deeper")
        case = TriangleCase.CASE3

    try:
        total = oplus(distance_transfinite(x, y), distance_transfinite(y, z))
    except LimitCarryError:
        logger.debug("Triangle sum for %s is undefined; skipping the inequality check", case.value)
        return case
    _require(
        fd_compare(total, distance_transfinite(x, z)) is not Order.LT,
        f"d(x,y) ⊕ d(y,z) = {total} is below d(x,z) = {distance_transfinite(x, z)}",
    )
    return case


def clopen_ball(x: Point, n: int) -> CylinderComplex:
    """{y : d(x,y) <= 2^-n}: the cylinder of sequences agreeing with x on n-1 bits."""
    if n < 1:
        raise MalformedInputError(f"Ball radius exponent must be at least 1, got {n}")
    return cylinder(x.prefix(n - 1))
