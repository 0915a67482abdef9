"""Hypothesis strategies shared by the property tests."""

from hypothesis import strategies as st

from cantorlab.cantortrie import from_cylinders
from cantorlab.seqcore import OrdinalIndex, Point, TransfinitePoint

bitwords = st.text(alphabet="01", max_size=6)


@st.composite
def points(draw, max_resolution: int = 10) -> Point:
    period = draw(st.text(alphabet="01", min_size=1, max_size=max(1, max_resolution // 2)))
    preperiod = draw(st.text(alphabet="01", max_size=max_resolution - len(period)))
    return Point(preperiod, period)


def terminating_points(max_prefix: int = 6):
    return st.text(alphabet="01", max_size=max_prefix).map(lambda pre: Point(pre, "0"))


def ordinal_indices(max_q: int = 2, max_n: int = 16):
    return st.builds(OrdinalIndex, st.integers(0, max_q), st.integers(0, max_n))


def successor_indices(max_q: int = 2, max_n: int = 16):
    return st.builds(OrdinalIndex, st.integers(0, max_q), st.integers(1, max_n))


@st.composite
def transfinite_points(draw, k: int = 2) -> TransfinitePoint:
    return TransfinitePoint(tuple(draw(points(6)) for _ in range(k)))


def complexes(max_depth: int = 4):
    return st.lists(st.text(alphabet="01", max_size=max_depth), max_size=6).map(from_cylinders)
