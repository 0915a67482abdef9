"""Text and JSON encodings for points, distances, complexes and schedules."""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from .cantortrie import EMPTY, FULL, CylinderComplex, Leaf, Node, PointedSet, from_cylinders, join
from .construction import DeletionSchedule
from .errors import MalformedInputError
from .seqcore import Point
from .umetric import FormalDistance

logger = logging.getLogger(__name__)

JsonValue = Union[Dict[str, Any], List[Any], str, int, float, bool, None]


def loads(text: str, source: str = "<input>") -> JsonValue:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"{source}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def load_json_file(path: Union[str, Path]) -> JsonValue:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError as exc:
        raise MalformedInputError(f"Input file not found: {path}") from exc
    return loads(text, str(path))


def dumps(value: JsonValue) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(value, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_text(text: str, path: Optional[Union[str, Path]]) -> None:
    """Write to path (creating parent directories) or to stdout when path is None."""
    if path is None:
        sys.stdout.write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info("Wrote %s", path)


def _node_to_json(node: Node) -> JsonValue:
    if isinstance(node, Leaf):
        return "F" if node.full else "E"
    return {"0": _node_to_json(node.zero), "1": _node_to_json(node.one)}


def complex_to_json(c: CylinderComplex) -> JsonValue:
    return _node_to_json(c.root)


def complex_from_json(value: JsonValue) -> CylinderComplex:
    """Rebuild a complex from nested {"0": ..., "1": ...} objects with "F"/"E" leaves; the result is canonical."""
    if value == "F":
        return FULL
    if value == "E":
        return EMPTY
    if isinstance(value, dict) and set(value) == {"0", "1"}:
        return join(complex_from_json(value["0"]), complex_from_json(value["1"]))
    raise MalformedInputError(f"Complex nodes are 'F', 'E' or {{'0': ..., '1': ...}}, got {value!r}")


def parse_initial(text: str) -> CylinderComplex:
    """`full`, `empty`, or a comma-separated list of stems such as `0,11`."""
    value = text.strip().lower()
    if value == "full":
        return FULL
    if value in ("empty", ""):
        return EMPTY
    return from_cylinders(part.strip() for part in value.split(","))


def pointed_set_to_json(s: PointedSet) -> Dict[str, Any]:
    return {
        "body": complex_to_json(s.body),
        "extras": sorted(str(p) for p in s.extras),
        "holes": sorted(str(p) for p in s.holes),
    }


def pointed_set_from_json(value: JsonValue) -> PointedSet:
    if not isinstance(value, dict) or "body" not in value:
        raise MalformedInputError("A pointed set needs an object with a 'body' key")
    return PointedSet(
        complex_from_json(value["body"]),
        frozenset(Point.parse(p) for p in value.get("extras", [])),
        frozenset(Point.parse(p) for p in value.get("holes", [])),
    )


def schedule_from_json(value: JsonValue) -> DeletionSchedule:
    if not isinstance(value, list):
        raise MalformedInputError(f"A schedule is a JSON list of entries, got {type(value).__name__}")
    return DeletionSchedule.from_records(value)


def schedule_to_json(schedule: DeletionSchedule) -> List[Dict[str, Any]]:
    return schedule.to_records()


def load_schedule(path: Union[str, Path]) -> DeletionSchedule:
    return schedule_from_json(load_json_file(path))


def formal_distance_to_text(d: FormalDistance) -> str:
    return str(d)


def formal_distance_from_text(text: str) -> FormalDistance:
    return FormalDistance.parse(text)
