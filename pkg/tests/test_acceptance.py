"""End-to-end checks at the sizes the tool is expected to handle."""

import random

import pytest

from cantorlab.bisection import bisection_locate
from cantorlab.cantortrie import FULL, PointedSet, contains_point, nowhere_dense_at_depth
from cantorlab.cardinality import bct_witness, every_cutoff, naturals_demo, verify_P_definition
from cantorlab.config_loader import RunConfig, SuiteSizes
from cantorlab.construction import dense_schedule, run_construction
from cantorlab.seqcore import Point
from cantorlab.suites import SUITES, random_nowhere_dense, run_verify_suites, summary_table

CONFIG = RunConfig(
    depth=3,
    seed=20240601,
    suites=SuiteSizes(
        metric_samples=500, formal_samples=200, construction_schedules=50, baire_instances=20, kernel_samples=100
    ),
)


@pytest.mark.parametrize("suite", SUITES)
def test_suite_passes(suite):
    reports = run_verify_suites(suite, CONFIG)
    assert reports[suite].passed, reports[suite].as_dict()["issues"]
    assert sum(reports[suite].checked.values()) > 0


def test_summary_table_has_no_failures():
    table = summary_table(run_verify_suites("naturals", CONFIG))
    assert (table["failed"] == 0).all()


def test_dense_depth_three_schedules_leave_nowhere_dense_remainders():
    rng = random.Random(5)
    for _ in range(50):
        state = run_construction(FULL, dense_schedule(FULL, 3, rng))
        assert not state.current.is_empty
        assert nowhere_dense_at_depth(state.current, 3)


def test_full_survives_three_dense_deletions_at_depth_two():
    verdict = verify_P_definition(FULL, 2, 64)
    assert verdict.exhaustive_empty
    assert verdict.max_k_nonempty == 3
    assert verdict.method == "exhaustive"


def test_bct_witness_on_random_instances():
    rng = random.Random(9)
    for _ in range(20):
        escape = "".join(rng.choice("01") for _ in range(4))
        nd_sets = [random_nowhere_dense(rng, 3, escape) for _ in range(4)]
        witness = bct_witness(FULL, nd_sets, 3, 1)
        assert not any(contains_point(nd, witness) for nd in nd_sets)


def test_first_midpoint_is_one_half():
    located = bisection_locate(PointedSet(FULL), Point.parse("1:0"), 1)
    assert (located.member, located.steps) == (True, 1)


@pytest.mark.parametrize("bound", [10, 20, 40])
def test_naturals_finite_versus_cofinal(bound):
    finite = naturals_demo(bound, [1, bound // 2])
    assert finite.remainder_size == bound - bound // 2
    assert not finite.empties_in_limit
    cofinal = naturals_demo(bound, every_cutoff)
    assert cofinal.remainder_size == 0 and cofinal.empties_in_limit
