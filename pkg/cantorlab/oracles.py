"""
Brute-force reference computations.

Everything here works by enumerating words at a fixed resolution or scanning
bits one at a time, with none of the trie recursion or periodicity arithmetic
the main modules use. The verify suites and the tests compare against them.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key
from typing import FrozenSet, Iterator, List, Optional, Sequence

from .cantortrie import CylinderComplex, PointedSet, contains_cylinder, depth, from_cylinders, words_of_length
from .errors import PreconditionError
from .seqcore import BitWord, OrdinalIndex, Point, TransfinitePoint, bit_at, compare_lex


def word_set(c: CylinderComplex, resolution: int) -> FrozenSet[BitWord]:
    """The depth-`resolution` words whose cylinders lie in c; exact once resolution >= depth(c)."""
    if resolution < depth(c):
        raise PreconditionError(f"Resolution {resolution} is below the complex depth {depth(c)}")
    return frozenset(w for w in words_of_length(resolution) if contains_cylinder(c, w))


def bitmap_of(c: CylinderComplex, resolution: int) -> int:
    words = word_set(c, resolution)
    return sum(1 << i for i, w in enumerate(words_of_length(resolution)) if w in words)


def complex_of_bitmap(bits: int, resolution: int) -> CylinderComplex:
    return from_cylinders(w for i, w in enumerate(words_of_length(resolution)) if bits >> i & 1)


def all_complexes(resolution: int) -> Iterator[CylinderComplex]:
    """Every clopen set of depth <= resolution; 2^(2^resolution) of them."""
    for bits in range(2 ** (2**resolution)):
        yield complex_of_bitmap(bits, resolution)


def _meets(words: FrozenSet[BitWord], stem: BitWord) -> bool:
    return any(w.startswith(stem) for w in words)


def oracle_dense(c: CylinderComplex, d: int) -> bool:
    words = word_set(c, max(depth(c), d))
    return all(_meets(words, w) for w in words_of_length(d))


def oracle_nowhere_dense(c: CylinderComplex, d: int, lookahead: Optional[int] = None) -> bool:
    limit = d + (2 * d if lookahead is None else lookahead)
    words = word_set(c, max(depth(c), limit))
    for length in range(d + 1):
        for stem in words_of_length(length):
            if not _meets(words, stem):
                continue
            if not any(not _meets(words, stem + tail) for tail in words_of_length(limit - length)):
                return False
    return True


def oracle_measure(c: CylinderComplex) -> Fraction:
    resolution = depth(c)
    return Fraction(len(word_set(c, resolution)), 2**resolution)


def oracle_contains(c: CylinderComplex, p: Point) -> bool:
    resolution = depth(c)
    return p.prefix(resolution) in word_set(c, resolution)


def oracle_isolated(s: PointedSet, horizon: int) -> List[Point]:
    """Extras with some k <= horizon whose cylinder [p|k] holds no other member; every k is tried."""
    resolution = max(depth(s.body), horizon)
    body = word_set(s.body, resolution)
    found = []
    for p in s.extras:
        for k in range(horizon + 1):
            stem = p.prefix(k)
            others = [q for q in s.extras if q != p and q.prefix(k) == stem]
            if not others and not _meets(body, stem):
                found.append(p)
                break
    return sorted(found, key=cmp_to_key(lambda a, b: compare_lex(a, b).value))


def oracle_first_disagreement(x: Point, y: Point, limit: int) -> Optional[int]:
    for i in range(limit):
        if bit_at(x, i) != bit_at(y, i):
            return i
    return None


def oracle_transfinite_split(x: TransfinitePoint, y: TransfinitePoint, limit: int) -> Optional[OrdinalIndex]:
    """Scan K·limit bits in ordinal order; returns the 1-based height of the first disagreement."""
    for q in range(x.k):
        for n in range(limit):
            idx = OrdinalIndex(q, n)
            if x.bit_at(idx) != y.bit_at(idx):
                return idx.successor()
    return None


def oracle_value(p: Point, bits: int) -> Fraction:
    """Value of the first `bits` bits; within 2^-bits of the exact value."""
    return sum((Fraction(bit_at(p, i), 2 ** (i + 1)) for i in range(bits)), Fraction(0))


def oracle_remainder(initial: CylinderComplex, deleted: Sequence[BitWord]) -> FrozenSet[BitWord]:
    resolution = max([depth(initial)] + [len(s) for s in deleted])
    return frozenset(w for w in word_set(initial, resolution) if not any(w.startswith(s) for s in deleted))
