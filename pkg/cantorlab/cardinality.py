"""
Finite, checkable versions of the category and cardinality arguments:
Baire-category witnesses, the dense-deletion predicate at a fixed depth,
cardinality classes of pointed sets, and the naturals demo.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .cantortrie import (
    CylinderComplex,
    PointedSet,
    cb_kernel,
    contains_point,
    cylinder,
    difference,
    from_cylinders,
    full_stems,
    intersects_cylinder,
    nowhere_dense_at_depth,
    words_of_length,
)
from .construction import DeletionSchedule
from .errors import BudgetExceededError, InvariantViolationError, MalformedInputError, PreconditionError
from .seqcore import BitWord, Point, natural_point

logger = logging.getLogger(__name__)

EXHAUSTIVE_LIMIT = 16


def bct_witness(
    space: CylinderComplex,
    nd_sets: Sequence[CylinderComplex],
    depth: int,
    lookahead: Optional[int] = None,
) -> Point:
    """
    A Point of space outside every set in nd_sets.

    Builds cylinders D_0 ⊇ D_1 ⊇ ... with D_{k+1} ⊆ D_k − nd_sets[k], trying
    shorter stems first and backtracking when a later set swallows a choice.
    """
    if space.is_empty:
        raise PreconditionError("bct_witness needs a nonempty space")
    for index, nd in enumerate(nd_sets):
        if not nowhere_dense_at_depth(nd, depth, lookahead):
            raise PreconditionError(f"Set {index} is not nowhere dense at depth {depth}")

    def _ordered(c: CylinderComplex) -> List[BitWord]:
        return sorted(full_stems(c), key=lambda s: (len(s), s))

    def _descend(stem: BitWord, k: int) -> Optional[BitWord]:
        if k == len(nd_sets):
            return stem
        for candidate in _ordered(difference(cylinder(stem), nd_sets[k])):
            found = _descend(candidate, k + 1)
            if found is not None:
                return found
        logger.debug("Backtracking from [%s] at set %d", stem, k)
        return None

    for start in _ordered(space):
        stem = _descend(start, 0)
        if stem is not None:
            break
    else:
        raise PreconditionError(f"The {len(nd_sets)} sets jointly cover the space at this resolution")

    witness = Point(stem, "0")
    if not contains_point(space, witness) or any(contains_point(nd, witness) for nd in nd_sets):
        raise InvariantViolationError(f"Witness {witness} is outside the space or inside a listed set")
    return witness


@dataclass(frozen=True)
class PVerification:
    max_k_nonempty: int
    witness_schedule: DeletionSchedule
    exhaustive_empty: bool
    candidates: Tuple[BitWord, ...]
    method: str

    def as_dict(self) -> Dict[str, object]:
        return {
            "max_k_nonempty": self.max_k_nonempty,
            "witness_schedule": self.witness_schedule.to_records(),
            "exhaustive_empty": self.exhaustive_empty,
            "candidates": list(self.candidates),
            "method": self.method,
        }


def _dense_over(space: CylinderComplex, depth: int, chosen: Sequence[BitWord]) -> bool:
    """Every depth-(depth-1) cylinder meeting space holds one of the chosen depth-`depth` cylinders."""
    return all(
        any(w.startswith(parent) for w in chosen)
        for parent in words_of_length(depth - 1)
        if intersects_cylinder(space, parent)
    )


def _exhaustive_search(space: CylinderComplex, depth: int, candidates: Sequence[BitWord]) -> Tuple[int, Tuple[BitWord, ...]]:
    for k in range(len(candidates), 0, -1):
        for chosen in combinations(candidates, k):
            if _dense_over(space, depth, chosen) and not difference(space, from_cylinders(chosen)).is_empty:
                return k, chosen
    return 0, ()


def _guided_search(space: CylinderComplex, depth: int, candidates: Sequence[BitWord]) -> Tuple[int, Tuple[BitWord, ...]]:
    """
    Greedy: first one child under every parent that meets the space, then the
    remaining candidates; each cylinder is added only while something is left.
    """
    firsts: Dict[BitWord, BitWord] = {}
    for w in candidates:
        firsts.setdefault(w[:-1], w)
    order = list(firsts.values()) + [w for w in candidates if firsts[w[:-1]] != w]

    chosen: List[BitWord] = []
    remainder = space
    for w in order:
        after = difference(remainder, cylinder(w))
        if after.is_empty:
            logger.debug("Greedy search keeps [%s] to leave a remainder", w)
            continue
        chosen.append(w)
        remainder = after
    if not _dense_over(space, depth, chosen):
        return 0, ()
    return len(chosen), tuple(chosen)


def verify_P_definition(space: CylinderComplex, depth: int, budget: int) -> PVerification:
    """
    The largest number of depth-`depth` cylinders that can be deleted densely
    (every parent cylinder loses a child) while leaving something behind, and
    whether deleting all of them empties the space.
    """
    if depth < 1:
        raise PreconditionError(f"depth must be at least 1, got {depth}")
    if 2**depth > budget:
        raise BudgetExceededError(f"2^{depth} cylinders exceed the search budget {budget}")
    candidates = tuple(w for w in words_of_length(depth) if intersects_cylinder(space, w))
    exhaustive_empty = difference(space, from_cylinders(candidates)).is_empty and _dense_over(space, depth, candidates)
    if not candidates:
        return PVerification(0, DeletionSchedule(), True, (), "vacuous")

    guided_k, guided_choice = _guided_search(space, depth, candidates)
    if len(candidates) <= EXHAUSTIVE_LIMIT:
        k, choice = _exhaustive_search(space, depth, candidates)
        if k != guided_k:
            raise InvariantViolationError(f"Exhaustive search found {k} deletions but guided search found {guided_k}")
        method = "exhaustive"
    else:
        k, choice = guided_k, guided_choice
        method = "guided"
    logger.info("Dense deletion at depth %d: %d of %d cylinders keep a remainder (%s)", depth, k, len(candidates), method)
    return PVerification(k, DeletionSchedule.of_stems(choice), exhaustive_empty, candidates, method)


class CardinalityKind(Enum):
    EMPTY = "Empty"
    FINITE = "Finite"
    CONTINUUM_SCALE = "ContinuumScale"


@dataclass(frozen=True)
class CardinalityClass:
    kind: CardinalityKind
    count: Optional[int] = None

    def __str__(self) -> str:
        if self.kind is CardinalityKind.FINITE:
            return f"Finite({self.count})"
        return self.kind.value


def classify_cardinality(s: PointedSet, horizon: int) -> CardinalityClass:
    if s.is_empty:
        return CardinalityClass(CardinalityKind.EMPTY)
    kernel = cb_kernel(s, horizon)
    if kernel.body.is_empty:
        return CardinalityClass(CardinalityKind.FINITE, len(s.extras))
    return CardinalityClass(CardinalityKind.CONTINUUM_SCALE)


@dataclass(frozen=True)
class NaturalsResult:
    bound: int
    remainder_size: int
    empties_in_limit: bool
    rerun_remainder_size: int
    remainder: Tuple[Point, ...]

    def as_dict(self) -> Dict[str, object]:
        return {
            "bound": self.bound,
            "remainder_size": self.remainder_size,
            "empties_in_limit": self.empties_in_limit,
            "rerun_remainder_size": self.rerun_remainder_size,
            "remainder": [str(p) for p in self.remainder],
        }


Family = Union[Sequence[int], Callable[[int], Iterable[int]]]


def _remainder(bound: int, cutoffs: Sequence[int]) -> List[int]:
    # d_n = {m < n}
    top = max(cutoffs, default=0)
    return list(range(min(top, bound), bound))


def _cutoffs_at(family: Family, bound: int) -> List[int]:
    cutoffs = list(family(bound)) if callable(family) else list(family)
    bad = sorted(i for i in cutoffs if i < 0 or i > bound)
    if bad:
        raise MalformedInputError(f"Indices outside [0, {bound}]: {bad}")
    return cutoffs


def every_cutoff(bound: int) -> range:
    """The family of all d_n, n <= bound; cofinal at every bound."""
    return range(bound + 1)


def naturals_demo(bound: int, deleted_indices: Family) -> NaturalsResult:
    """
    Delete the open sets d_n = {m < n} from {0, ..., bound-1}, then run the
    same family again at 2·bound.

    A list is a fixed finite family and is re-run unchanged. A callable is a
    rule giving the cutoffs at a bound and is evaluated afresh at 2·bound.
    The family empties in the limit only when both runs leave nothing.
    """
    if bound < 1:
        raise MalformedInputError(f"bound must be at least 1, got {bound}")
    remainder = _remainder(bound, _cutoffs_at(deleted_indices, bound))
    rerun = _remainder(2 * bound, _cutoffs_at(deleted_indices, 2 * bound))
    empties = not remainder and not rerun
    logger.info("Naturals demo at bound %d leaves %d (re-run leaves %d)", bound, len(remainder), len(rerun))
    return NaturalsResult(bound, len(remainder), empties, len(rerun), tuple(natural_point(m) for m in remainder))


def naturals_topology_report(bound: int) -> Dict[str, bool]:
    """
    Check the terminal-segment topology on {0, ..., bound-1} with closed sets
    u_n = {m > n}, and the discrete variant with closed {m <= n}, open {m < n}.
    """
    if bound < 3:
        raise MalformedInputError(f"bound must be at least 3, got {bound}")
    universe = frozenset(range(bound))

    def u(n: int) -> FrozenSet[int]:
        return frozenset(m for m in universe if m > n)

    def d(n: int) -> FrozenSet[int]:
        return universe - u(n)

    pairs = [(m, n) for m in range(bound) for n in range(m + 2, bound)]
    report = {
        "nested_intersection": all(
            frozenset.intersection(*(u(i) for i in range(m + 1, n))) == u(n - 1) for m, n in pairs
        ),
        "chain": all(u(j) < u(i) for i in range(bound) for j in range(i + 1, bound)),
        "finite_union_collapses": all(
            frozenset().union(*(u(i) for i in range(m, n))) == u(m) for m, n in pairs
        ),
        "finite_removal_nonempty": all(
            universe - frozenset().union(*(d(i) for i in range(m + 1, n))) for m, n in pairs if n < bound - 1
        ),
        "full_removal_empty": not (universe - frozenset().union(*(d(i) for i in range(bound)))),
        "discrete_closed_is_open": all(
            frozenset(m for m in universe if m <= n) == frozenset(m for m in universe if m < n + 1)
            for n in range(bound)
        ),
        "discrete_singletons_clopen": all(
            frozenset(m for m in universe if m <= n) - frozenset(m for m in universe if m < n) == {n}
            for n in range(bound)
        ),
    }
    failed = [name for name, ok in report.items() if not ok]
    if failed:
        logger.warning("Naturals topology checks failed at bound %d: %s", bound, failed)
    return report
