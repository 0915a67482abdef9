"""Locate a Point by repeated bisection of [0, 1] and decide its membership."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

from .cantortrie import PointedSet
from .errors import BudgetExceededError, PreconditionError
from .seqcore import Order, Point, compare_lex, midpoint

logger = logging.getLogger(__name__)

LEFT_END = Point("", "0")
RIGHT_END = Point("", "1")


@dataclass(frozen=True)
class BisectionResult:
    member: bool
    steps: int
    trace: Tuple[Dict[str, str], ...]

    def as_dict(self) -> Dict[str, object]:
        return {"member": self.member, "steps": self.steps, "trace": list(self.trace)}


def bisection_locate(space: PointedSet, x: Point, max_steps: int) -> BisectionResult:
    """
    Halve [a, b] around x until a midpoint (or an end point) equals x, then
    look x up in the space. Points whose expansion does not terminate are never
    hit and run out of steps.
    """
    if max_steps < 1:
        raise PreconditionError(f"max_steps must be at least 1, got {max_steps}")
    a, b = LEFT_END, RIGHT_END
    trace: List[Dict[str, str]] = []
    for step in range(1, max_steps + 1):
        mid = midpoint(a, b)
        entry = {"a": str(a), "b": str(b), "mid": str(mid)}
        if x in (mid, a, b):
            trace.append({**entry, "branch": "HIT"})
            member = x in space
            logger.debug("Located %s after %d steps; member=%s", x, step, member)
            return BisectionResult(member, step, tuple(trace))
        if compare_lex(x, mid) is Order.LT:
            trace.append({**entry, "branch": "L"})
            b = mid
        else:
            trace.append({**entry, "branch": "R"})
            a = mid
    raise BudgetExceededError(f"{x} was not located within {max_steps} bisection steps", trace=trace)
