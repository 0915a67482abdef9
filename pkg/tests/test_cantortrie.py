import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from cantorlab.cantortrie import (
    EMPTY,
    FULL,
    Branch,
    Covered,
    Leaf,
    PointedSet,
    Uncovered,
    any_point,
    cb_kernel,
    complement,
    contains_cylinder,
    contains_point,
    cover_check,
    cylinder,
    depth,
    difference,
    from_cylinders,
    full_stems,
    intersect,
    intersects_cylinder,
    is_dense_at_depth,
    isolated_points,
    join,
    measure,
    nowhere_dense_at_depth,
    random_member,
    split_interval,
    subtree,
    union,
)
from cantorlab.errors import MalformedInputError
from cantorlab.oracles import (
    all_complexes,
    bitmap_of,
    oracle_contains,
    oracle_dense,
    oracle_isolated,
    oracle_measure,
    oracle_nowhere_dense,
)
from cantorlab.seqcore import Point
from tests.strategies import complexes, points


def P(text):
    return Point.parse(text)


def test_from_cylinders_examples():
    assert from_cylinders(["0", "1"]) == FULL
    assert from_cylinders([]) == EMPTY
    assert from_cylinders(["00", "01"]) == from_cylinders(["0"])


def test_boolean_examples():
    assert complement(FULL) == EMPTY
    assert union(cylinder("00"), cylinder("01")) == cylinder("0")
    assert intersect(cylinder("0"), cylinder("01")) == cylinder("01")


def test_operators_match_module_functions():
    a, b = from_cylinders(["0", "11"]), from_cylinders(["01", "1"])
    assert a | b == union(a, b)
    assert a & b == intersect(a, b)
    assert a - b == difference(a, b)
    assert ~a == complement(a)
    assert cylinder("01") <= a


def test_tries_stay_canonical():
    assert cylinder("01").root == Branch(Branch(Leaf(False), Leaf(True)), Leaf(False))
    assert join(FULL, FULL) == FULL
    assert difference(cylinder("0"), cylinder("0")).root == Leaf(False)


@pytest.mark.parametrize("stems, text, inside", [(None, "0:1", True), (["01"], "0:1", True), (["01"], ":0", False)])
def test_contains_point_examples(stems, text, inside):
    c = FULL if stems is None else from_cylinders(stems)
    assert contains_point(c, P(text)) is inside


@pytest.mark.parametrize(
    "c, value",
    [(FULL, Fraction(1)), (difference(FULL, cylinder("00")), Fraction(3, 4)), (from_cylinders(["00", "11"]), Fraction(1, 2)), (EMPTY, Fraction(0))],
)
def test_measure_examples(c, value):
    assert measure(c) == value


@settings(max_examples=200)
@given(complexes(), complexes(), complexes())
def test_boolean_algebra_laws(a, b, c):
    assert complement(union(a, b)) == intersect(complement(a), complement(b))
    assert complement(intersect(a, b)) == union(complement(a), complement(b))
    assert union(a, a) == a and intersect(a, a) == a
    assert union(a, intersect(a, b)) == a
    assert intersect(a, union(a, b)) == a
    assert intersect(a, union(b, c)) == union(intersect(a, b), intersect(a, c))
    assert complement(complement(a)) == a


@given(complexes(), complexes())
def test_measure_is_additive(a, b):
    assert measure(union(a, b)) + measure(intersect(a, b)) == measure(a) + measure(b)
    assert measure(a) == oracle_measure(a)


def test_every_depth_two_complex_matches_its_bitmap():
    seen = {}
    for c in all_complexes(2):
        bits = bitmap_of(c, 2)
        assert bits not in seen
        seen[bits] = c
        assert bitmap_of(complement(c), 2) == 0b1111 ^ bits
    assert len(seen) == 16


@given(complexes(), points())
def test_contains_point_follows_the_prefix(c, p):
    assert contains_point(c, p) == contains_cylinder(c, p.prefix(depth(c)))


def test_density_examples():
    assert is_dense_at_depth(FULL, 5)
    assert is_dense_at_depth(complement(cylinder("000")), 2)
    assert not is_dense_at_depth(cylinder("1"), 1)
    assert nowhere_dense_at_depth(EMPTY, 3)
    assert not nowhere_dense_at_depth(FULL, 1)


@settings(max_examples=100)
@given(complexes(4))
def test_density_checks_match_the_oracles(c):
    for d in range(0, 3):
        assert is_dense_at_depth(c, d) == oracle_dense(c, d)
        for lookahead in (0, 1, 2):
            assert nowhere_dense_at_depth(c, d, lookahead) == oracle_nowhere_dense(c, d, lookahead)


def test_isolated_points_examples():
    p = P("01:0")
    assert isolated_points(PointedSet(EMPTY, {p}), 3) == [p]
    assert isolated_points(PointedSet(FULL), 3) == []
    assert isolated_points(PointedSet(cylinder("0"), {P(":1")}), 3) == [P(":1")]


def test_isolated_points_needs_a_fine_enough_horizon():
    pair = PointedSet(EMPTY, {P(":1"), P("10:1")})
    assert isolated_points(pair, 1) == []
    assert isolated_points(pair, 2) == [P("10:1"), P(":1")]


def test_cb_kernel_examples():
    assert cb_kernel(PointedSet(EMPTY, {P(":0"), P(":1")}), 3).is_empty
    assert cb_kernel(PointedSet(FULL), 3) == PointedSet(FULL)
    kernel = cb_kernel(PointedSet(cylinder("0"), {P(":1"), P("10:1")}), 4)
    assert kernel == PointedSet(cylinder("0"))


def test_cb_kernel_keeps_points_near_the_body():
    s = PointedSet(cylinder("00"), {P("01:0")})
    assert cb_kernel(s, 1) == s
    assert cb_kernel(s, 2).extras == frozenset()


@settings(max_examples=100)
@given(complexes(3), points(6), points(6), points(6))
def test_isolated_points_match_the_oracle(body, p, q, r):
    extras = {x for x in (p, q, r) if not contains_point(body, x)}
    s = PointedSet(body, extras)
    for horizon in (0, 2, 4):
        assert isolated_points(s, horizon) == oracle_isolated(s, horizon)
        assert isolated_points(cb_kernel(s, horizon), horizon) == []


def test_pointed_set_rejects_misplaced_points():
    with pytest.raises(MalformedInputError):
        PointedSet(cylinder("0"), {P(":0")})
    with pytest.raises(MalformedInputError):
        PointedSet(cylinder("0"), holes={P(":1")})
    punctured = PointedSet(cylinder("0"), holes={P(":0")})
    assert P(":0") not in punctured and P("01:0") in punctured


@pytest.mark.parametrize(
    "space, cover, expected",
    [
        (FULL, ["0", "1"], Covered(("0", "1"))),
        (FULL, ["0", "10", "110", "1110"], Uncovered("1111")),
        (cylinder("0"), ["0", "1"], Covered(("0",))),
        (cylinder("0"), ["00", "0", "01"], Covered(("0",))),
    ],
)
def test_cover_check_examples(space, cover, expected):
    assert cover_check(space, cover) == expected


@settings(max_examples=100)
@given(complexes(3), complexes(3))
def test_cover_check_is_sound(space, covering):
    cover = full_stems(covering)
    result = cover_check(space, cover)
    if isinstance(result, Covered):
        kept = from_cylinders(result.minimal_subcover)
        assert difference(space, kept).is_empty
        for stem in result.minimal_subcover:
            rest = [w for w in result.minimal_subcover if w != stem]
            assert not difference(space, from_cylinders(rest)).is_empty
    else:
        assert intersects_cylinder(space, result.witness)
        assert not intersects_cylinder(covering, result.witness)


def test_helpers():
    c = from_cylinders(["01", "1"])
    assert depth(c) == 2
    assert subtree(c, "0") == cylinder("1")
    assert any_point(c) == P("01:0")
    assert any_point(c, "00") is None
    assert full_stems(c) == ["01", "1"]
    assert split_interval(P(":0"), 2) == "001"
    with pytest.raises(MalformedInputError):
        split_interval(P(":0"), -1)


def test_random_member_stays_inside():
    rng = random.Random(7)
    c = from_cylinders(["011", "1"])
    for _ in range(50):
        p = random_member(c, rng)
        assert contains_point(c, p)
        q = random_member(c, rng, "01")
        assert q.prefix(3) == "011"
    assert random_member(c, rng, "00") is None


@given(complexes(), points())
def test_contains_point_matches_the_word_oracle(c, p):
    assert contains_point(c, p) == oracle_contains(c, p)
