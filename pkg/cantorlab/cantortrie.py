"""
Clopen subsets of Cantor space as canonical binary tries.

A complex is a finite binary trie whose leaves are FULL or EMPTY; it denotes
the union of the cylinders [w] over the stems w of its FULL leaves. Tries are
only ever built through `_mk`, which merges a node whose children are equal
leaves, so two complexes denote the same set iff they are equal structurally.
"""

from __future__ import annotations

import logging
import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from itertools import product
from typing import FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union

from .errors import InvariantViolationError, MalformedInputError
from .seqcore import BitWord, Point, as_bitword, bit_at, compare_lex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Leaf:
    full: bool

    def __repr__(self) -> str:
        return "F" if self.full else "E"


@dataclass(frozen=True)
class Branch:
    zero: "Node"
    one: "Node"

    def __repr__(self) -> str:
        return f"({self.zero!r} {self.one!r})"

    def child(self, bit: Union[int, str]) -> "Node":
        return self.one if int(bit) else self.zero


Node = Union[Leaf, Branch]

FULL_LEAF = Leaf(True)
EMPTY_LEAF = Leaf(False)


def _mk(zero: Node, one: Node) -> Node:
    if isinstance(zero, Leaf) and zero == one:
        return zero
    return Branch(zero, one)


def _union(a: Node, b: Node) -> Node:
    if isinstance(a, Leaf):
        return a if a.full else b
    if isinstance(b, Leaf):
        return b if b.full else a
    return _mk(_union(a.zero, b.zero), _union(a.one, b.one))


def _intersect(a: Node, b: Node) -> Node:
    if isinstance(a, Leaf):
        return b if a.full else a
    if isinstance(b, Leaf):
        return a if b.full else b
    return _mk(_intersect(a.zero, b.zero), _intersect(a.one, b.one))


def _complement(a: Node) -> Node:
    if isinstance(a, Leaf):
        return EMPTY_LEAF if a.full else FULL_LEAF
    return _mk(_complement(a.zero), _complement(a.one))


def _measure(a: Node, weight: Fraction) -> Fraction:
    if isinstance(a, Leaf):
        return weight if a.full else Fraction(0)
    half = weight / 2
    return _measure(a.zero, half) + _measure(a.one, half)


def _depth(a: Node) -> int:
    if isinstance(a, Leaf):
        return 0
    return 1 + max(_depth(a.zero), _depth(a.one))


@dataclass(frozen=True)
class CylinderComplex:
    """Immutable clopen set; `|`, `&`, `-` and `~` are the Boolean operations."""

    root: Node = EMPTY_LEAF

    @classmethod
    def full(cls) -> "CylinderComplex":
        return cls(FULL_LEAF)

    @classmethod
    def empty(cls) -> "CylinderComplex":
        return cls(EMPTY_LEAF)

    @property
    def is_empty(self) -> bool:
        return self.root == EMPTY_LEAF

    @property
    def is_full(self) -> bool:
        return self.root == FULL_LEAF

    def __or__(self, other: "CylinderComplex") -> "CylinderComplex":
        return union(self, other)

    def __and__(self, other: "CylinderComplex") -> "CylinderComplex":
        return intersect(self, other)

    def __sub__(self, other: "CylinderComplex") -> "CylinderComplex":
        return difference(self, other)

    def __invert__(self) -> "CylinderComplex":
        return complement(self)

    def __contains__(self, p: Point) -> bool:
        return contains_point(self, p)

    def __le__(self, other: "CylinderComplex") -> bool:
        return difference(self, other).is_empty

    def __repr__(self) -> str:
        return f"CylinderComplex({self.root!r})"


FULL = CylinderComplex.full()
EMPTY = CylinderComplex.empty()


def cylinder(stem: BitWord) -> CylinderComplex:
    node: Node = FULL_LEAF
    for bit in reversed(as_bitword(stem)):
        node = _mk(node, EMPTY_LEAF) if bit == "0" else _mk(EMPTY_LEAF, node)
    return CylinderComplex(node)


def join(zero: CylinderComplex, one: CylinderComplex) -> CylinderComplex:
    """The complex whose halves below 0 and 1 are the given complexes."""
    return CylinderComplex(_mk(zero.root, one.root))


def from_cylinders(words: Iterable[BitWord]) -> CylinderComplex:
    node: Node = EMPTY_LEAF
    for word in words:
        node = _union(node, cylinder(word).root)
    return CylinderComplex(node)


def complement(a: CylinderComplex) -> CylinderComplex:
    return CylinderComplex(_complement(a.root))


def union(a: CylinderComplex, b: CylinderComplex) -> CylinderComplex:
    return CylinderComplex(_union(a.root, b.root))


def intersect(a: CylinderComplex, b: CylinderComplex) -> CylinderComplex:
    return CylinderComplex(_intersect(a.root, b.root))


def difference(a: CylinderComplex, b: CylinderComplex) -> CylinderComplex:
    return CylinderComplex(_intersect(a.root, _complement(b.root)))


def intersect_all(complexes: Iterable[CylinderComplex]) -> CylinderComplex:
    node: Node = FULL_LEAF
    for c in complexes:
        node = _intersect(node, c.root)
    return CylinderComplex(node)


def subtree(c: CylinderComplex, stem: BitWord) -> CylinderComplex:
    """The part of c inside [stem], re-rooted at stem."""
    node = c.root
    for bit in stem:
        if isinstance(node, Leaf):
            break
        node = node.child(bit)
    return CylinderComplex(node)


def intersects_cylinder(c: CylinderComplex, stem: BitWord) -> bool:
    return not subtree(c, stem).is_empty


def contains_cylinder(c: CylinderComplex, stem: BitWord) -> bool:
    return subtree(c, stem).is_full


def contains_point(c: CylinderComplex, p: Point) -> bool:
    node = c.root
    idx = 0
    while isinstance(node, Branch):
        node = node.child(bit_at(p, idx))
        idx += 1
    return node.full


def measure(c: CylinderComplex) -> Fraction:
    return _measure(c.root, Fraction(1))


def depth(c: CylinderComplex) -> int:
    return _depth(c.root)


def leaves(c: CylinderComplex) -> Iterator[Tuple[BitWord, bool]]:
    """(stem, is_full) for every leaf, in lexicographic stem order."""
    stack: List[Tuple[BitWord, Node]] = [("", c.root)]
    while stack:
        stem, node = stack.pop()
        if isinstance(node, Leaf):
            yield stem, node.full
        else:
            stack.append((stem + "1", node.one))
            stack.append((stem + "0", node.zero))


def full_stems(c: CylinderComplex) -> List[BitWord]:
    return [stem for stem, full in leaves(c) if full]


def words_of_length(d: int) -> Iterator[BitWord]:
    for bits in product("01", repeat=d):
        yield "".join(bits)


def any_point(c: CylinderComplex, stem: BitWord = "") -> Optional[Point]:
    """The leftmost-leaf Point of c inside [stem] (stem then zeros), or None."""
    node = subtree(c, stem).root
    word = stem
    while isinstance(node, Branch):
        if node.zero != EMPTY_LEAF:
            node, word = node.zero, word + "0"
        else:
            node, word = node.one, word + "1"
    if not node.full:
        return None
    return Point(word, "0")


def random_member(c: CylinderComplex, rng: random.Random, stem: BitWord = "", tail: int = 2) -> Optional[Point]:
    """A random Point of c inside [stem]: a random FULL leaf, a short random tail, then a constant period."""
    node = subtree(c, stem).root
    word = stem
    while isinstance(node, Branch):
        bit = rng.choice([b for b in "01" if node.child(b) != EMPTY_LEAF])
        node, word = node.child(bit), word + bit
    if not node.full:
        return None
    word += "".join(rng.choice("01") for _ in range(rng.randint(0, tail)))
    return Point(word, rng.choice("01"))


def split_interval(x: Point, n: int) -> BitWord:
    """u_n(x): sequences agreeing with x below n and differing at n."""
    if n < 0:
        raise MalformedInputError(f"Split height must be non-negative, got {n}")
    return x.prefix(n) + str(1 - bit_at(x, n))


def is_dense_at_depth(c: CylinderComplex, d: int) -> bool:
    """Every cylinder [w] with |w| = d meets c."""

    def _dense(node: Node, remaining: int) -> bool:
        if isinstance(node, Leaf):
            return node.full
        if remaining == 0:
            return True
        return _dense(node.zero, remaining - 1) and _dense(node.one, remaining - 1)

    return _dense(c.root, d)


def _has_empty_within(node: Node, remaining: int) -> bool:
    if isinstance(node, Leaf):
        return not node.full
    if remaining <= 0:
        return False
    return _has_empty_within(node.zero, remaining - 1) or _has_empty_within(node.one, remaining - 1)


def nowhere_dense_at_depth(c: CylinderComplex, d: int, lookahead: Optional[int] = None) -> bool:
    """
    Every [w] with |w| <= d that meets c has a sub-cylinder [w'] disjoint from c,
    with |w'| <= d + lookahead (lookahead defaults to 2d).
    """
    limit = d + (2 * d if lookahead is None else lookahead)

    def _check(node: Node, level: int) -> bool:
        if node == EMPTY_LEAF:
            return True
        if not _has_empty_within(node, limit - level):
            return False
        if level == d or isinstance(node, Leaf):
            return True
        return _check(node.zero, level + 1) and _check(node.one, level + 1)

    return _check(c.root, 0)


def _lex_sorted(points: Iterable[Point]) -> List[Point]:
    return sorted(points, key=cmp_to_key(lambda a, b: compare_lex(a, b).value))


@dataclass(frozen=True)
class PointedSet:
    """denote(body) ∪ extras − holes, with extras outside body and holes inside it."""

    body: CylinderComplex = EMPTY
    extras: FrozenSet[Point] = frozenset()
    holes: FrozenSet[Point] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "extras", frozenset(self.extras))
        object.__setattr__(self, "holes", frozenset(self.holes))
        inside = [str(p) for p in self.extras if contains_point(self.body, p)]
        if inside:
            raise MalformedInputError(f"Extras must lie outside the body: {sorted(inside)}")
        outside = [str(p) for p in self.holes if not contains_point(self.body, p)]
        if outside:
            raise MalformedInputError(f"Holes must lie inside the body: {sorted(outside)}")

    def __contains__(self, p: Point) -> bool:
        if p in self.holes:
            return False
        return p in self.extras or contains_point(self.body, p)

    @property
    def is_empty(self) -> bool:
        # Finitely many holes never exhaust a nonempty clopen body.
        return self.body.is_empty and not self.extras


def isolated_points(s: PointedSet, horizon: int) -> List[Point]:
    """
    Extras p for which some cylinder [p|k], k <= horizon, holds no other member.

    The condition only gets weaker as k grows, so k = horizon decides it.
    Points of the body are never isolated: each FULL leaf is a perfect set.
    """
    isolated = []
    for p in s.extras:
        stem = p.prefix(horizon)
        if intersects_cylinder(s.body, stem):
            continue
        if any(q != p and q.prefix(horizon) == stem for q in s.extras):
            continue
        isolated.append(p)
    return _lex_sorted(isolated)


def cb_kernel(s: PointedSet, horizon: int) -> PointedSet:
    """Remove isolated points until none are left (the dense-in-itself kernel)."""
    current = s
    rounds = 0
    while True:
        isolated = isolated_points(current, horizon)
        if not isolated:
            break
        rounds += 1
        logger.debug("Kernel round %d removes %d isolated points", rounds, len(isolated))
        current = PointedSet(current.body, current.extras - frozenset(isolated), current.holes)
    return current


@dataclass(frozen=True)
class Covered:
    minimal_subcover: Tuple[BitWord, ...]


@dataclass(frozen=True)
class Uncovered:
    witness: BitWord


CoverResult = Union[Covered, Uncovered]


def cover_check(space: CylinderComplex, cover: Iterable[BitWord]) -> CoverResult:
    words = list(dict.fromkeys(as_bitword(w) for w in cover))
    covering = from_cylinders(words)
    if not difference(space, covering).is_empty:
        frontier = deque([""])
        while frontier:
            stem = frontier.popleft()
            if not intersects_cylinder(space, stem):
                continue
            local = subtree(covering, stem)
            if local.is_empty:
                return Uncovered(stem)
            if not local.is_full:
                frontier.extend((stem + "0", stem + "1"))
        raise InvariantViolationError("Residual set is nonempty but no witness stem was found")

    kept = list(words)
    for word in words:
        trial = [w for w in kept if w != word]
        if difference(space, from_cylinders(trial)).is_empty:
            kept = trial
    return Covered(tuple(kept))
