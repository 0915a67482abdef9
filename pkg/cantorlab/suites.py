"""
Named invariant suites run by `cantorlab verify`.

Each suite samples instances from a seeded generator, checks its properties
against exact computation or the brute-force oracles, and reports per-property
counts and issues.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Dict, List

import pandas as pd

from .bisection import bisection_locate
from .cantortrie import (
    FULL,
    CylinderComplex,
    PointedSet,
    Uncovered,
    cb_kernel,
    contains_point,
    cover_check,
    difference,
    from_cylinders,
    intersect,
    intersects_cylinder,
    is_dense_at_depth,
    isolated_points,
    measure,
    nowhere_dense_at_depth,
    union,
    words_of_length,
)
from .cardinality import (
    CardinalityKind,
    bct_witness,
    classify_cardinality,
    every_cutoff,
    naturals_demo,
    naturals_topology_report,
    verify_P_definition,
)
from .config_loader import RunConfig
from .construction import DeletionSchedule, dense_schedule, preserve_run, run_construction, run_transfinite, schedule_is_dense
from .errors import LimitCarryError, MetricAxiomViolation, UsageError
from .oracles import all_complexes, bitmap_of, oracle_contains, oracle_dense, oracle_isolated, oracle_nowhere_dense, word_set
from .seqcore import OrdinalIndex, Order, Point, TransfinitePoint, enumerate_points, random_point
from .umetric import FormalDistance, distance, distance_transfinite, fd_compare, oplus, triangle_case, clopen_ball

logger = logging.getLogger(__name__)

SUITES = ("metric", "trie", "baire", "cardinality", "bisection", "naturals")


@dataclass
class SuiteResult:
    name: str
    checked: Dict[str, int] = field(default_factory=dict)
    issues: Dict[str, List[str]] = field(default_factory=dict)

    def check(self, prop: str, ok: bool, detail: str = "") -> None:
        self.checked[prop] = self.checked.get(prop, 0) + 1
        failures = self.issues.setdefault(prop, [])
        if not ok and len(failures) < 10:
            failures.append(detail or prop)

    @property
    def passed(self) -> bool:
        return not any(self.issues.values())

    def summary(self) -> pd.DataFrame:
        rows = [
            {"suite": self.name, "property": prop, "checked": n, "failed": len(self.issues.get(prop, []))}
            for prop, n in self.checked.items()
        ]
        return pd.DataFrame(rows, columns=["suite", "property", "checked", "failed"])

    def as_dict(self) -> Dict[str, object]:
        return {
            "passed": self.passed,
            "checked": dict(self.checked),
            "issues": {k: v for k, v in self.issues.items() if v},
        }


# Instance generators


def random_complex(rng: random.Random, resolution: int) -> CylinderComplex:
    return from_cylinders(w for w in words_of_length(resolution) if rng.random() < 0.5)


def random_nowhere_dense(rng: random.Random, d: int, escape: str) -> CylinderComplex:
    """
    A complex that is nowhere dense at depth d with lookahead 1: a random set of
    depth-d cylinders, each missing one half; the half missing under escape[:d]
    is [escape], so every complex built with the same escape leaves it alone.
    """
    body = [w for w in words_of_length(d) if rng.random() < 0.5] or [escape[:d]]
    holes = [w + (escape[d] if w == escape[:d] else rng.choice("01")) for w in body]
    return difference(from_cylinders(body), from_cylinders(holes))


def random_pointed_set(rng: random.Random, resolution: int, max_extras: int) -> PointedSet:
    body = random_complex(rng, resolution - 1)
    extras = set()
    for _ in range(rng.randint(0, max_extras)):
        p = random_point(rng, resolution + 2)
        if not contains_point(body, p):
            extras.add(p)
    return PointedSet(body, frozenset(extras))


def _transfinite_triple(rng: random.Random, k: int) -> List[TransfinitePoint]:
    """Three ω·k points sharing random stretches so that all split patterns occur."""
    base = [random_point(rng, 6) for _ in range(k)]
    triple = []
    for _ in range(3):
        blocks = list(base)
        if rng.random() < 0.75:
            q = rng.randrange(k)
            blocks[q] = Point(blocks[q].prefix(rng.randint(0, 4)) + rng.choice("01"), rng.choice(["0", "1", "01"]))
        triple.append(TransfinitePoint(tuple(blocks)))
    return triple


def oracle_kernel(s: PointedSet, horizon: int) -> PointedSet:
    current = s
    while True:
        isolated = set(oracle_isolated(current, horizon))
        if not isolated:
            return current
        current = PointedSet(current.body, current.extras - isolated, current.holes)


# Suites


def metric_suite(config: RunConfig, rng: random.Random) -> SuiteResult:
    result = SuiteResult("metric")
    for _ in range(config.suites.metric_samples):
        x, y, z = (random_point(rng, 10) for _ in range(3))
        dxy, dyz, dxz = distance(x, y), distance(y, z), distance(x, z)
        result.check("symmetry", dxy == distance(y, x), f"d({x},{y}) != d({y},{x})")
        result.check("identity", (dxy == 0) == (x == y) and dxy >= 0, f"identity fails for {x}, {y}")
        result.check("triangle", dxy + dyz >= dxz, f"triangle fails for {x}, {y}, {z}")
        result.check("ultrametric", max(dxy, dyz) >= dxz, f"ultrametric fails for {x}, {y}, {z}")
        result.check("bound", dxy <= Fraction(1, 2), f"d({x},{y}) = {dxy} > 1/2")

    for q, n in product(range(3), range(1, 17)):
        pos = OrdinalIndex(q, n)
        total = oplus(FormalDistance.unit(pos), FormalDistance.unit(pos))
        result.check("carry", total == FormalDistance.unit(OrdinalIndex(q, n - 1)), f"1_{pos} ⊕ 1_{pos} = {total}")
    for pos in [OrdinalIndex(0, 0), OrdinalIndex(1, 0), OrdinalIndex(2, 0)]:
        try:
            oplus(FormalDistance.unit(pos), FormalDistance.unit(pos))
            result.check("limit_carry_error", False, f"carry out of {pos} did not raise")
        except LimitCarryError:
            result.check("limit_carry_error", True)

    for _ in range(config.suites.formal_samples):
        x, y, z = _transfinite_triple(rng, 2)
        try:
            triangle_case(x, y, z)
            result.check("triangle_case", True)
        except MetricAxiomViolation as exc:
            result.check("triangle_case", False, str(exc))
        p, q_, u, v = (random_point(rng, 8) for _ in range(4))
        formal = fd_compare(
            distance_transfinite(TransfinitePoint.from_point(p, 2), TransfinitePoint.from_point(q_, 2)),
            distance_transfinite(TransfinitePoint.from_point(u, 2), TransfinitePoint.from_point(v, 2)),
        )
        a, b = distance(p, q_), distance(u, v)
        rational = Order.LT if a < b else Order.GT if a > b else Order.EQ
        result.check("formal_rational_agreement", formal is rational, f"{p},{q_} vs {u},{v}")

    for _ in range(20):
        x = random_point(rng, 8)
        for n in range(1, 7):
            ball = clopen_ball(x, n)
            for w in words_of_length(6):
                for period in ("0", "1"):
                    y = Point(w, period)
                    inside = distance(x, y) <= Fraction(1, 2**n)
                    result.check("clopen_ball", inside == contains_point(ball, y), f"ball({x},{n}) at {y}")
    return result


def trie_suite(config: RunConfig, rng: random.Random) -> SuiteResult:
    result = SuiteResult("trie")
    resolution = 3
    complexes = list(all_complexes(resolution))
    by_bits = {bitmap_of(c, resolution): c for c in complexes}
    full_mask = 2 ** (2**resolution) - 1
    sample_points = list(enumerate_points(4))
    words = list(words_of_length(resolution))
    result.check("distinct_denotations", len(by_bits) == len(complexes), f"{len(by_bits)} of {len(complexes)}")

    for bits, c in by_bits.items():
        result.check("complement", ~c == by_bits[full_mask ^ bits], f"complement of {c}")
        result.check("measure", measure(c) == Fraction(bin(bits).count("1"), 2**resolution), f"measure of {c}")
        for p in sample_points:
            expected = bool(bits >> words.index(p.prefix(resolution)) & 1)
            result.check("contains_point", contains_point(c, p) == expected, f"{p} in {c}")
            result.check("contains_point_oracle", oracle_contains(c, p) == expected, f"oracle: {p} in {c}")
        for d in (1, 2):
            result.check("dense", is_dense_at_depth(c, d) == oracle_dense(c, d), f"dense({c}, {d})")
            result.check(
                "nowhere_dense",
                nowhere_dense_at_depth(c, d, 1) == oracle_nowhere_dense(c, d, 1),
                f"nowhere_dense({c}, {d})",
            )
    for a_bits, a in by_bits.items():
        for b_bits, b in by_bits.items():
            result.check("union", union(a, b) == by_bits[a_bits | b_bits], f"{a} | {b}")
            result.check("intersect", intersect(a, b) == by_bits[a_bits & b_bits], f"{a} & {b}")

    for _ in range(config.suites.kernel_samples):
        space = random_complex(rng, 3)
        cover = [rng.choice(list(words_of_length(rng.randint(1, 3)))) for _ in range(4)]
        found = cover_check(space, cover)
        residue = word_set(difference(space, from_cylinders(cover)), 3)
        if isinstance(found, Uncovered):
            stem = found.witness
            untouched = not any(stem.startswith(c) or c.startswith(stem) for c in cover)
            result.check(
                "cover_witness",
                bool(residue) and intersects_cylinder(space, stem) and untouched,
                f"{space} {cover}: witness {stem!r}",
            )
        else:
            sub = from_cylinders(found.minimal_subcover)
            minimal = all(
                not difference(space, from_cylinders([w for w in found.minimal_subcover if w != drop])).is_empty
                for drop in found.minimal_subcover
            )
            result.check("cover_subcover", not residue and difference(space, sub).is_empty and minimal, f"{space} {cover}")
    return result


def baire_suite(config: RunConfig, rng: random.Random) -> SuiteResult:
    result = SuiteResult("baire")
    d, lookahead = config.depth, config.effective_lookahead

    for _ in range(config.suites.construction_schedules):
        schedule = dense_schedule(FULL, d, rng, config.budget)
        state = run_construction(FULL, schedule, config.budget)
        dense = schedule_is_dense(state, d, lookahead)
        result.check("schedule_dense", dense, f"schedule {schedule.to_records()} is not dense at depth {d}")
        result.check("remainder_nonempty", not state.current.is_empty, f"schedule {schedule.to_records()} emptied FULL")
        result.check(
            "dense_gives_nowhere_dense",
            not dense or nowhere_dense_at_depth(state.current, d, lookahead),
            f"remainder of {schedule.to_records()} is not nowhere dense",
        )

    for k_depth in range(2, d + 1):
        k = 2 ** (k_depth - 1)
        stems = rng.sample(list(words_of_length(k_depth)), k)
        state = run_construction(FULL, DeletionSchedule.of_stems(stems), config.budget)
        result.check(
            "finite_deletion_bound",
            measure(state.current) >= 1 - Fraction(k, 2**k_depth) > 0,
            f"{stems} left measure {measure(state.current)}",
        )

    for p_depth in range(1, min(d, 4) + 1):
        verdict = verify_P_definition(FULL, p_depth, config.budget)
        result.check("verify_P_exhaustive_empty", verdict.exhaustive_empty, f"depth {p_depth}")
        result.check(
            "verify_P_max_k",
            verdict.max_k_nonempty == 2**p_depth - 1,
            f"depth {p_depth}: {verdict.max_k_nonempty}",
        )

    for _ in range(config.suites.baire_instances):
        escape = "".join(rng.choice("01") for _ in range(4))
        nd_sets = [random_nowhere_dense(rng, 3, escape) for _ in range(4)]
        witness = bct_witness(FULL, nd_sets, 3, 1)
        result.check(
            "bct_witness_avoids",
            all(not contains_point(nd, witness) for nd in nd_sets),
            f"{witness} lies in a listed set",
        )
    return result


def cardinality_suite(config: RunConfig, rng: random.Random) -> SuiteResult:
    result = SuiteResult("cardinality")
    horizon = 4
    for _ in range(config.suites.kernel_samples):
        s = random_pointed_set(rng, 4, 4)
        kernel = cb_kernel(s, horizon)
        expected = oracle_kernel(s, horizon)
        result.check("kernel_oracle", kernel == expected, f"kernel of {s}")
        result.check("kernel_perfect", not isolated_points(kernel, horizon), f"kernel of {s} has isolated points")
        cls = classify_cardinality(s, horizon)
        if s.is_empty:
            ok = cls.kind is CardinalityKind.EMPTY
        elif s.body.is_empty:
            ok = cls.kind is CardinalityKind.FINITE and cls.count == len(s.extras)
        else:
            ok = cls.kind is CardinalityKind.CONTINUUM_SCALE
        result.check("classify", ok, f"{s} classified {cls}")

    avoid = [Point("", "0"), Point("10", "0"), Point("110", "0")]
    preserved = preserve_run(FULL, avoid, Point("", "1"), 3, budget=8)
    result.check("preserve_witness_count", len(preserved.witnesses) >= 3, f"{len(preserved.witnesses)} witnesses")
    result.check(
        "preserve_witnesses_kept",
        all(contains_point(preserved.state.current, w) for w in preserved.witnesses),
        "a witness was deleted",
    )
    state = run_transfinite(FULL, [[Point("", "0")], [Point("10", "0")]], Point("", "1"), 2, config.k_bound, config.budget)
    result.check(
        "transfinite_seed_survives",
        len(state.limits) == 2 and all(rec.witness == Point("", "1") for rec in state.limits),
        f"limits {[rec.as_dict() for rec in state.limits]}",
    )
    return result


def bisection_suite(config: RunConfig, rng: random.Random) -> SuiteResult:
    result = SuiteResult("bisection")
    space = PointedSet(FULL)
    for x in enumerate_points(6):
        if not x.is_terminating():
            continue
        located = bisection_locate(space, x, x.resolution + 1)
        result.check("step_bound", located.steps <= x.resolution + 1, f"{x} took {located.steps} steps")
        result.check("membership", located.member, f"{x} not a member of FULL")
    first = bisection_locate(space, Point("1", "0"), 1)
    result.check("first_midpoint", first.steps == 1 and first.member, "1000... not found at step 1")
    for _ in range(config.suites.kernel_samples):
        s = random_pointed_set(rng, 4, 3)
        x = Point("".join(rng.choice("01") for _ in range(rng.randint(0, 5))), "0")
        located = bisection_locate(s, x, x.resolution + 1)
        result.check("random_membership", located.member == (x in s), f"{x} in {s}")
    return result


def naturals_suite(config: RunConfig, rng: random.Random) -> SuiteResult:
    result = SuiteResult("naturals")
    for bound in (10, 20, 40):
        picked = sorted(rng.sample(range(bound), rng.randint(1, 5)))
        finite = naturals_demo(bound, picked)
        result.check(
            "finite_leaves_remainder",
            finite.remainder_size == bound - max(picked) and finite.remainder_size > 0 and not finite.empties_in_limit,
            f"bound {bound} indices {picked}: {finite.as_dict()}",
        )
        cofinal = naturals_demo(bound, every_cutoff)
        result.check("cofinal_empties", cofinal.remainder_size == 0 and cofinal.empties_in_limit, f"bound {bound}")
        fixed = naturals_demo(bound, list(range(bound + 1)))
        result.check(
            "fixed_family_keeps_a_tail",
            fixed.remainder_size == 0 and fixed.rerun_remainder_size == bound and not fixed.empties_in_limit,
            f"bound {bound}: {fixed.as_dict()}",
        )
        none = naturals_demo(bound, [])
        result.check("no_deletions", none.remainder_size == bound, f"bound {bound}")
        for name, ok in naturals_topology_report(bound).items():
            result.check(name, ok, f"bound {bound}")
    return result


SUITE_RUNNERS: Dict[str, Callable[[RunConfig, random.Random], SuiteResult]] = {
    "metric": metric_suite,
    "trie": trie_suite,
    "baire": baire_suite,
    "cardinality": cardinality_suite,
    "bisection": bisection_suite,
    "naturals": naturals_suite,
}


def run_verify_suites(suite: str, config: RunConfig) -> Dict[str, SuiteResult]:
    """
    Run one named suite or "all", each with its own generator seeded from config.seed.
    """
    if suite == "all":
        names = list(SUITES)
    elif suite in SUITE_RUNNERS:
        names = [suite]
    else:
        raise UsageError(f"Unknown suite {suite!r}; expected one of {list(SUITES) + ['all']}")

    reports: Dict[str, SuiteResult] = {}
    for name in names:
        reports[name] = SUITE_RUNNERS[name](config, random.Random(config.seed))

    for name, res in reports.items():
        if res.passed:
            logger.info("Checks passed for %s with no issues detected.", name)
        else:
            logger.warning("Checks for %s found issues: %s", name, res.as_dict()["issues"])
    return reports


def summary_table(reports: Dict[str, SuiteResult]) -> pd.DataFrame:
    frames = [res.summary() for res in reports.values()]
    if not frames:
        return pd.DataFrame(columns=["suite", "property", "checked", "failed"])
    return pd.concat(frames, ignore_index=True)
