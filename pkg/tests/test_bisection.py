import pytest

from cantorlab.bisection import bisection_locate
from cantorlab.cantortrie import EMPTY, FULL, PointedSet, cylinder
from cantorlab.errors import BudgetExceededError, PreconditionError
from cantorlab.seqcore import Point, enumerate_points


def P(text):
    return Point.parse(text)


def test_first_midpoint_is_one_half():
    result = bisection_locate(PointedSet(FULL), P("1:0"), 10)
    assert (result.member, result.steps) == (True, 1)
    assert result.trace == ({"a": ":0", "b": ":1", "mid": "1:0", "branch": "HIT"},)


def test_locates_a_quarter_outside_the_body():
    result = bisection_locate(PointedSet(cylinder("1")), P("01:0"), 10)
    assert (result.member, result.steps) == (False, 2)
    assert [entry["branch"] for entry in result.trace] == ["L", "HIT"]
    assert result.trace[1]["b"] == "1:0"


@pytest.mark.parametrize("text", [":0", ":1"])
def test_end_points_are_hit_on_the_first_step(text):
    assert bisection_locate(PointedSet(FULL), P(text), 1).steps == 1


def test_membership_honours_extras_and_holes():
    assert bisection_locate(PointedSet(EMPTY, {P("011:0")}), P("011:0"), 8).member
    assert not bisection_locate(PointedSet(FULL, holes={P("011:0")}), P("011:0"), 8).member


def test_terminating_points_need_at_most_resolution_plus_one_steps():
    for p in enumerate_points(6):
        if not p.is_terminating():
            continue
        result = bisection_locate(PointedSet(FULL), p, p.resolution + 1)
        assert result.member
        assert result.steps <= p.resolution + 1


def test_non_terminating_points_exhaust_the_budget():
    with pytest.raises(BudgetExceededError) as info:
        bisection_locate(PointedSet(FULL), P(":01"), 5)
    assert len(info.value.trace) == 5
    assert info.value.trace[0]["branch"] == "L"


def test_max_steps_must_be_positive():
    with pytest.raises(PreconditionError):
        bisection_locate(PointedSet(FULL), P("1:0"), 0)
