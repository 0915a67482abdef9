"""
The deletion game on clopen subsets of Cantor space.

A `cntr` step removes a cylinder around a target branch, walking down the
target past the node where it parts from every earlier target and then `r`
further splitting nodes of the current complex. `run_construction` folds those
steps over a schedule; `preserve_run` and `run_transfinite` choose the offsets
themselves so that a chosen witness (and every fresh witness picked along the
way) survives each deletion, through limit stages in the ω·K case.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .cantortrie import (
    CylinderComplex,
    contains_point,
    cylinder,
    difference,
    from_cylinders,
    intersect_all,
    intersects_cylinder,
    leaves,
    measure,
    random_member,
    subtree,
    words_of_length,
)
from .errors import (
    BudgetExceededError,
    InvariantViolationError,
    MalformedInputError,
    NonRepeatingError,
    PreconditionError,
)
from .seqcore import BitWord, OrdinalIndex, Point, as_bitword, first_disagreement

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 64
POLICIES = ("keep", "fresh")


@dataclass(frozen=True)
class BranchDeletion:
    """A `cntr` step: delete a cylinder around `target`, `r` splitting nodes down."""

    target: Point
    r: int = 1

    def __post_init__(self) -> None:
        if self.r < 1:
            raise MalformedInputError(f"Offset r must be at least 1, got {self.r} for target {self.target}")

    def to_record(self) -> Dict[str, Any]:
        return {"target": str(self.target), "r": self.r}


@dataclass(frozen=True)
class CylinderDeletion:
    """Delete the fixed clopen interval [stem]."""

    stem: BitWord

    def __post_init__(self) -> None:
        object.__setattr__(self, "stem", as_bitword(self.stem))

    def to_record(self) -> Dict[str, Any]:
        return {"stem": self.stem}


ScheduleEntry = Union[BranchDeletion, CylinderDeletion]


def entry_from_record(record: Mapping[str, Any]) -> ScheduleEntry:
    if not isinstance(record, Mapping):
        raise MalformedInputError(f"Schedule entries must be objects, got {record!r}")
    if "target" in record:
        unknown = set(record) - {"target", "r"}
        if unknown:
            raise MalformedInputError(f"Unknown keys in schedule entry: {sorted(unknown)}")
        r = record.get("r", 1)
        if not isinstance(r, int) or isinstance(r, bool):
            raise MalformedInputError(f"Offset r must be an integer, got {r!r}")
        return BranchDeletion(Point.parse(str(record["target"])), r)
    if "stem" in record:
        if set(record) != {"stem"}:
            raise MalformedInputError(f"Unknown keys in schedule entry: {sorted(set(record) - {'stem'})}")
        return CylinderDeletion(str(record["stem"]))
    raise MalformedInputError(f"Schedule entry needs 'target' or 'stem', got keys {sorted(record)}")


@dataclass(frozen=True)
class DeletionSchedule:
    """An ordered, non-repeating list of deletions."""

    entries: Tuple[ScheduleEntry, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(self.entries))
        seen_targets = set()
        seen_stems = set()
        for entry in self.entries:
            if isinstance(entry, BranchDeletion):
                if entry.target in seen_targets:
                    raise NonRepeatingError(f"Target {entry.target} occurs twice in the schedule")
                seen_targets.add(entry.target)
            else:
                if entry.stem in seen_stems:
                    raise NonRepeatingError(f"Stem {entry.stem!r} occurs twice in the schedule")
                seen_stems.add(entry.stem)

    @classmethod
    def from_records(cls, records: Iterable[Mapping[str, Any]]) -> "DeletionSchedule":
        return cls(tuple(entry_from_record(record) for record in records))

    @classmethod
    def of_targets(cls, targets: Iterable[Point], r: int = 1) -> "DeletionSchedule":
        return cls(tuple(BranchDeletion(t, r) for t in targets))

    @classmethod
    def of_stems(cls, stems: Iterable[BitWord]) -> "DeletionSchedule":
        return cls(tuple(CylinderDeletion(s) for s in stems))

    def to_records(self) -> List[Dict[str, Any]]:
        return [entry.to_record() for entry in self.entries]

    def targets(self) -> List[Point]:
        return [e.target for e in self.entries if isinstance(e, BranchDeletion)]

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


@dataclass(frozen=True)
class CntrStep:
    applied: bool
    next: CylinderComplex
    deleted: Optional[BitWord]
    n: int
    h: Optional[int]


def is_splitting(c: CylinderComplex, stem: BitWord) -> bool:
    return intersects_cylinder(c, stem + "0") and intersects_cylinder(c, stem + "1")


def split_index(target: Point, prior_targets: Iterable[Point]) -> int:
    """n: the deepest node at which target parts from an earlier target (0 if none)."""
    heights = [first_disagreement(target, p) for p in prior_targets]
    return max((h for h in heights if h is not None), default=0)


def splitting_depths(current: CylinderComplex, target: Point, start: int, count: int, budget: int) -> List[int]:
    """Depths of the first `count` splitting nodes of `current` on target's path at or below `start`."""
    depths: List[int] = []
    level = start
    while len(depths) < count:
        if level >= budget:
            raise BudgetExceededError(
                f"No splitting node for {target} within the resolution budget {budget} "
                f"(found {len(depths)} of {count} from depth {start})"
            )
        if is_splitting(current, target.prefix(level)):
            depths.append(level)
        level += 1
    return depths


def cntr_step(
    current: CylinderComplex,
    target: Point,
    r: int,
    prior_targets: Sequence[Point] = (),
    budget: int = DEFAULT_BUDGET,
    floor: int = 0,
) -> CntrStep:
    """
    Delete target↾h from current, h being one past the r-th splitting node after
    the first splitting node s₀ at depth >= max(n, floor).

    A target that is no longer in current leaves it unchanged (applied=False).
    """
    if r < 1:
        raise MalformedInputError(f"Offset r must be at least 1, got {r}")
    n = split_index(target, prior_targets)
    if not contains_point(current, target):
        logger.debug("Target %s already deleted; step is a no-op", target)
        return CntrStep(False, current, None, n, None)
    depths = splitting_depths(current, target, max(n, floor), r + 1, budget)
    h = depths[-1] + 1
    if h > budget:
        raise BudgetExceededError(f"Deletion height {h} for {target} exceeds the resolution budget {budget}")
    stem = target.prefix(h)
    return CntrStep(True, difference(current, cylinder(stem)), stem, n, h)


@dataclass(frozen=True)
class StageRecord:
    """One row of a run's stage table."""

    stage: str
    kind: str
    target: Optional[str]
    deleted: Optional[BitWord]
    n: Optional[int]
    r: Optional[int]
    h: Optional[int]
    measure: Fraction
    interval: Optional[BitWord] = None
    witnesses: int = 0

    def as_row(self) -> Dict[str, Any]:
        return {
            "stage": self.stage,
            "kind": self.kind,
            "target": self.target,
            "deleted": self.deleted,
            "n": self.n,
            "r": self.r,
            "h": self.h,
            "measure": str(self.measure),
            "interval": self.interval,
            "witnesses": self.witnesses,
        }


@dataclass(frozen=True)
class ConstructionState:
    initial: CylinderComplex
    stage: int
    current: CylinderComplex
    deleted: Tuple[BitWord, ...] = ()
    witnesses: Tuple[Point, ...] = ()
    split_heights: Tuple[int, ...] = ()
    offsets: Tuple[int, ...] = ()
    stages: Tuple[CylinderComplex, ...] = ()
    records: Tuple[StageRecord, ...] = ()
    intervals: Tuple[BitWord, ...] = ()


def _comparable(a: BitWord, b: BitWord) -> bool:
    return a.startswith(b) or b.startswith(a)


def state_checks(state: Any) -> Dict[str, bool]:
    """Reconstruction, distinct stems, witness containment and stage monotonicity."""
    complexes = [_complex_of(s) for s in state.stages]
    return {
        "reconstruction": difference(state.initial, from_cylinders(state.deleted)) == state.current,
        "distinct_stems": len(set(state.deleted)) == len(state.deleted),
        "witnesses_in_remainder": all(contains_point(state.current, w) for w in state.witnesses),
        "monotone": all(later <= earlier for earlier, later in zip(complexes, complexes[1:])),
    }


def check_state(state: Any) -> None:
    """Raise on the first failing entry of state_checks."""
    checks = state_checks(state)
    if not checks["reconstruction"]:
        raise InvariantViolationError(
            f"Remainder differs from initial minus {len(state.deleted)} deleted cylinders"
        )
    if not checks["distinct_stems"]:
        raise InvariantViolationError(f"Deleted stems repeat: {list(state.deleted)}")
    if not checks["witnesses_in_remainder"]:
        lost = [str(w) for w in state.witnesses if not contains_point(state.current, w)]
        raise InvariantViolationError(f"Witnesses missing from the remainder: {lost}")
    if not checks["monotone"]:
        raise InvariantViolationError("Stage sequence is not monotone decreasing")


def _complex_of(stage: Any) -> CylinderComplex:
    return stage[1] if isinstance(stage, tuple) else stage


def run_construction(
    initial: CylinderComplex,
    schedule: DeletionSchedule,
    budget: int = DEFAULT_BUDGET,
) -> ConstructionState:
    current = initial
    deleted: List[BitWord] = []
    heights: List[int] = []
    offsets: List[int] = []
    stages: List[CylinderComplex] = [initial]
    records: List[StageRecord] = []
    prior: List[Point] = []

    for index, entry in enumerate(schedule, start=1):
        if isinstance(entry, BranchDeletion):
            step = cntr_step(current, entry.target, entry.r, prior, budget)
            prior.append(entry.target)
            current = step.next
            if step.applied:
                deleted.append(step.deleted)
                heights.append(step.n)
                offsets.append(entry.r)
            records.append(
                StageRecord(
                    stage=str(index),
                    kind="branch" if step.applied else "skip",
                    target=str(entry.target),
                    deleted=step.deleted,
                    n=step.n,
                    r=entry.r,
                    h=step.h,
                    measure=measure(current),
                )
            )
        else:
            if entry.stem in deleted:
                raise NonRepeatingError(f"Stem {entry.stem!r} was already deleted")
            current = difference(current, cylinder(entry.stem))
            deleted.append(entry.stem)
            records.append(
                StageRecord(str(index), "cylinder", None, entry.stem, None, None, len(entry.stem), measure(current))
            )
        stages.append(current)

    state = ConstructionState(
        initial=initial,
        stage=len(schedule),
        current=current,
        deleted=tuple(deleted),
        split_heights=tuple(heights),
        offsets=tuple(offsets),
        stages=tuple(stages),
        records=tuple(records),
    )
    check_state(state)
    logger.info("Ran %d deletions (%d applied); final measure %s", len(schedule), len(deleted), measure(current))
    return state


def schedule_is_dense(state: Any, depth: int, lookahead: Optional[int] = None) -> bool:
    """
    Every depth-`depth` cylinder meeting the initial complex meets a deleted
    cylinder whose stem is at most depth + lookahead long (lookahead defaults to 2·depth).
    """
    limit = depth + (2 * depth if lookahead is None else lookahead)
    short = [s for s in state.deleted if len(s) <= limit]
    return all(
        any(_comparable(word, s) for s in short)
        for word in words_of_length(depth)
        if intersects_cylinder(state.initial, word)
    )


def dense_schedule(
    initial: CylinderComplex,
    depth: int,
    rng: random.Random,
    budget: int = DEFAULT_BUDGET,
    offsets: Sequence[int] = (1, 2),
) -> DeletionSchedule:
    """
    A random schedule whose run deletes inside every depth-`depth` cylinder
    that meets `initial`: one target per cylinder not already touched.
    """
    current = initial
    targets: List[Point] = []
    deleted: List[BitWord] = []
    entries: List[BranchDeletion] = []
    for word in words_of_length(depth):
        if not intersects_cylinder(initial, word) or any(_comparable(word, s) for s in deleted):
            continue
        target = random_member(current, rng, word)
        if target is None:
            continue
        r = rng.choice(list(offsets))
        step = cntr_step(current, target, r, targets, budget)
        entries.append(BranchDeletion(target, r))
        targets.append(target)
        deleted.append(step.deleted)
        current = step.next
    return DeletionSchedule(tuple(entries))


# Witness-preserving runs


@dataclass(frozen=True)
class LimitRecord:
    """At a limit stage: the preserved interval V = U_h and the stage h after which nothing below V changed."""

    stage: OrdinalIndex
    interval: BitWord
    settled_at: OrdinalIndex
    witness: Point

    def as_dict(self) -> Dict[str, str]:
        return {
            "stage": str(self.stage),
            "omega": self.stage.omega_form(),
            "interval": self.interval,
            "settled_at": str(self.settled_at),
            "witness": str(self.witness),
        }


@dataclass(frozen=True)
class TransfiniteConstructionState:
    initial: CylinderComplex
    stage: OrdinalIndex
    current: CylinderComplex
    deleted: Tuple[BitWord, ...] = ()
    witnesses: Tuple[Point, ...] = ()
    split_heights: Tuple[int, ...] = ()
    offsets: Tuple[int, ...] = ()
    stages: Tuple[Tuple[OrdinalIndex, CylinderComplex], ...] = ()
    records: Tuple[StageRecord, ...] = ()
    intervals: Tuple[Tuple[OrdinalIndex, BitWord], ...] = ()
    limits: Tuple[LimitRecord, ...] = ()


@dataclass(frozen=True)
class PreserveResult:
    state: ConstructionState
    witnesses: Tuple[Point, ...]


def fresh_point(
    current: CylinderComplex,
    stem: BitWord,
    forbidden: Iterable[Point],
    budget: int = DEFAULT_BUDGET,
) -> Point:
    """A Point of current inside [stem] that is not forbidden."""
    blocked = set(forbidden)
    leaf = next((w for w, full in _leaves_under(current, stem) if full), None)
    if leaf is None:
        raise PreconditionError(f"Interval [{stem}] holds no point of the current set")
    candidate = Point(leaf, "0")
    if candidate not in blocked:
        return candidate
    for extra in range(0, budget - len(leaf)):
        for tail in words_of_length(extra):
            candidate = Point(leaf + tail + "1", "0")
            if candidate not in blocked:
                return candidate
    raise BudgetExceededError(f"Every point of [{stem}] within the resolution budget {budget} is an avoid target")


def _leaves_under(current: CylinderComplex, stem: BitWord) -> Iterator[Tuple[BitWord, bool]]:
    for suffix, full in leaves(subtree(current, stem)):
        yield stem + suffix, full


@dataclass
class _PreserveEngine:
    """Mutable bookkeeping shared by preserve_run and run_transfinite."""

    initial: CylinderComplex
    forbidden: frozenset
    budget: int
    policy: str
    current: Optional[CylinderComplex] = None
    interval: BitWord = ""
    witness: Optional[Point] = None
    witnesses: List[Point] = field(default_factory=list)
    deleted: List[BitWord] = field(default_factory=list)
    heights: List[int] = field(default_factory=list)
    offsets: List[int] = field(default_factory=list)
    prior: List[Point] = field(default_factory=list)
    records: List[StageRecord] = field(default_factory=list)
    stages: List[Tuple[OrdinalIndex, CylinderComplex]] = field(default_factory=list)
    intervals: List[Tuple[OrdinalIndex, BitWord]] = field(default_factory=list)

    def step(self, stage: OrdinalIndex, target: Point) -> None:
        if target.prefix(len(self.interval)) != self.interval:
            logger.debug("Stage %s: target %s lies outside the interval [%s]", stage.omega_form(), target, self.interval)
            self.prior.append(target)
            self._record(stage, "outside", target, None, None, None, None)
            return
        if not contains_point(self.current, target):
            logger.debug("Stage %s: target %s is already deleted", stage.omega_form(), target)
            self.prior.append(target)
            self._record(stage, "skip", target, None, None, None, None)
            return

        guard = max(first_disagreement(target, w) for w in self.witnesses)
        floor = len(self.interval)
        r = 0
        while True:
            r += 1
            step = cntr_step(self.current, target, r, self.prior, self.budget, floor=floor)
            if step.h > guard:
                break
        self.prior.append(target)

        pieces = [
            target.prefix(level) + str(1 - target.bit(level))
            for level in range(floor, step.h)
            if intersects_cylinder(self.current, target.prefix(level) + str(1 - target.bit(level)))
        ]
        self.current = step.next
        self.deleted.append(step.deleted)
        self.heights.append(step.n)
        self.offsets.append(r)

        holders = {piece: [w for w in self.witnesses if w.prefix(len(piece)) == piece] for piece in pieces}
        for piece in pieces:
            if not holders[piece]:
                point = fresh_point(self.current, piece, self.forbidden | set(self.witnesses), self.budget)
                self.witnesses.append(point)
                holders[piece] = [point]

        if self.policy == "keep":
            chosen = next(p for p in pieces if self.witness.prefix(len(p)) == p)
            next_witness = self.witness
        else:
            chosen = pieces[-1]
            next_witness = self.witness if self.witness in holders[chosen] else holders[chosen][0]
        logger.debug(
            "Stage %s deletes %s (r=%d); %d pieces, interval now %s",
            stage.omega_form(),
            step.deleted,
            r,
            len(pieces),
            chosen,
        )
        self.interval = chosen
        self.witness = next_witness
        self._record(stage, "branch", target, step.deleted, step.n, r, step.h)

    def _record(self, stage, kind, target, deleted, n, r, h) -> None:
        self.records.append(
            StageRecord(
                stage=str(stage),
                kind=kind,
                target=None if target is None else str(target),
                deleted=deleted,
                n=n,
                r=r,
                h=h,
                measure=measure(self.current),
                interval=self.interval,
                witnesses=len(self.witnesses),
            )
        )
        self.stages.append((stage, self.current))
        self.intervals.append((stage, self.interval))

    def limit(self, stage: OrdinalIndex) -> LimitRecord:
        """Intersect every earlier stage and the nested intervals; the witness must survive."""
        self.current = intersect_all(c for _, c in self.stages)
        stems = [stem for _, stem in self.intervals]
        for outer, inner in zip(stems, stems[1:]):
            if not inner.startswith(outer):
                raise InvariantViolationError(f"Intervals are not nested at {stage.omega_form()}: {outer!r} then {inner!r}")
        deepest = stems[-1]
        if self.current.is_empty or not intersects_cylinder(self.current, deepest):
            raise InvariantViolationError(f"Limit stage {stage.omega_form()} has an empty preserved interval")
        if not contains_point(self.current, self.witness):
            raise InvariantViolationError(f"Witness {self.witness} did not survive to {stage.omega_form()}")
        settled = next(idx for idx, stem in self.intervals if stem == deepest)
        self._record(stage, "limit", None, None, None, None, None)
        return LimitRecord(stage, deepest, settled, self.witness)


def _start_engine(
    initial: CylinderComplex,
    targets: Iterable[Point],
    keep_seed: Point,
    budget: int,
    policy: str,
) -> _PreserveEngine:
    if policy not in POLICIES:
        raise PreconditionError(f"Unknown interval policy {policy!r}; expected one of {POLICIES}")
    forbidden = frozenset(targets)
    if keep_seed in forbidden:
        raise PreconditionError(f"Seed witness {keep_seed} is itself a deletion target")
    if not contains_point(initial, keep_seed):
        raise PreconditionError(f"Seed witness {keep_seed} is not in the initial set")
    engine = _PreserveEngine(initial, forbidden, budget, policy, current=initial, witness=keep_seed)
    engine.witnesses.append(keep_seed)
    engine.stages.append((OrdinalIndex(0, 0), initial))
    engine.intervals.append((OrdinalIndex(0, 0), ""))
    return engine


def preserve_run(
    initial: CylinderComplex,
    avoid: Sequence[Point],
    keep_seed: Point,
    steps: Optional[int] = None,
    budget: int = DEFAULT_BUDGET,
    policy: str = "keep",
) -> PreserveResult:
    """
    Delete around each avoid target in turn while keeping keep_seed, and a fresh
    witness in every piece the deletion splits off, in the remainder.
    """
    steps = len(avoid) if steps is None else steps
    if steps < 0 or steps > len(avoid):
        raise PreconditionError(f"Asked for {steps} steps with only {len(avoid)} avoid targets")
    engine = _start_engine(initial, avoid, keep_seed, budget, policy)
    for alpha, target in enumerate(avoid[:steps], start=1):
        engine.step(OrdinalIndex(0, alpha), target)
    state = ConstructionState(
        initial=initial,
        stage=steps,
        current=engine.current,
        deleted=tuple(engine.deleted),
        witnesses=tuple(engine.witnesses),
        split_heights=tuple(engine.heights),
        offsets=tuple(engine.offsets),
        stages=tuple(c for _, c in engine.stages),
        records=tuple(engine.records),
        intervals=tuple(stem for _, stem in engine.intervals),
    )
    check_state(state)
    logger.info("Preserved %d witnesses over %d steps; final measure %s", len(state.witnesses), steps, measure(state.current))
    return PreserveResult(state, state.witnesses)


def run_transfinite(
    initial: CylinderComplex,
    segments: Sequence[Sequence[Point]],
    keep_seed: Point,
    k: int,
    k_bound: int = 2,
    budget: int = DEFAULT_BUDGET,
    policy: str = "keep",
) -> TransfiniteConstructionState:
    """
    One preserving segment per ω-block; after block q the limit stage (q+1, 0)
    is the intersection of every earlier stage.
    """
    if k < 1:
        raise PreconditionError(f"Block count must be at least 1, got {k}")
    OrdinalIndex(k, 0).check_bound(k_bound)
    if len(segments) > k:
        raise PreconditionError(f"{len(segments)} segments do not fit in ω·{k}")
    padded = list(segments) + [[] for _ in range(k - len(segments))]
    engine = _start_engine(initial, [t for seg in padded for t in seg], keep_seed, budget, policy)

    limits: List[LimitRecord] = []
    for q, segment in enumerate(padded):
        for n, target in enumerate(segment, start=1):
            engine.step(OrdinalIndex(q, n), target)
        limits.append(engine.limit(OrdinalIndex(q + 1, 0)))

    state = TransfiniteConstructionState(
        initial=initial,
        stage=OrdinalIndex(k, 0),
        current=engine.current,
        deleted=tuple(engine.deleted),
        witnesses=tuple(engine.witnesses),
        split_heights=tuple(engine.heights),
        offsets=tuple(engine.offsets),
        stages=tuple(engine.stages),
        records=tuple(engine.records),
        intervals=tuple(engine.intervals),
        limits=tuple(limits),
    )
    check_state(state)
    logger.info("Transfinite run to ω·%d kept %d witnesses through %d limit stages", k, len(state.witnesses), len(limits))
    return state
