import json

import pytest
from hypothesis import given

from cantorlab.cantortrie import EMPTY, FULL, PointedSet, cylinder, from_cylinders
from cantorlab.errors import MalformedInputError, NonRepeatingError
from cantorlab.seqcore import OrdinalIndex, Point
from cantorlab.serialization import (
    complex_from_json,
    complex_to_json,
    dumps,
    formal_distance_from_text,
    formal_distance_to_text,
    load_json_file,
    load_schedule,
    loads,
    parse_initial,
    pointed_set_from_json,
    pointed_set_to_json,
    schedule_to_json,
    write_text,
)
from cantorlab.umetric import FormalDistance
from tests.strategies import complexes


def test_complex_json_layout():
    assert complex_to_json(FULL) == "F"
    assert complex_to_json(cylinder("01")) == {"0": {"0": "E", "1": "F"}, "1": "E"}


@given(complexes())
def test_complex_json_import_gives_back_the_same_complex(c):
    assert complex_from_json(json.loads(dumps(complex_to_json(c)))) == c


def test_complex_import_canonicalizes():
    assert complex_from_json({"0": "F", "1": {"0": "F", "1": "F"}}) == FULL
    with pytest.raises(MalformedInputError):
        complex_from_json({"0": "F"})
    with pytest.raises(MalformedInputError):
        complex_from_json("X")


@pytest.mark.parametrize("text, expected", [("full", FULL), ("empty", EMPTY), ("0,11", from_cylinders(["0", "11"])), (" FULL ", FULL)])
def test_parse_initial(text, expected):
    assert parse_initial(text) == expected


def test_parse_initial_rejects_non_binary_stems():
    with pytest.raises(MalformedInputError):
        parse_initial("0,12")


def test_json_errors_carry_line_and_column():
    with pytest.raises(MalformedInputError, match="line 2, column 3"):
        loads("[\n  }\n]")


def test_load_json_file_missing(tmp_path):
    with pytest.raises(MalformedInputError):
        load_json_file(tmp_path / "missing.json")


def test_schedule_files(tmp_path):
    path = tmp_path / "schedule.json"
    path.write_text('[{"target": ":0", "r": 1}, {"target": "01:0"}]', encoding="utf-8")
    schedule = load_schedule(path)
    assert schedule_to_json(schedule) == [{"target": ":0", "r": 1}, {"target": "01:0", "r": 1}]

    path.write_text('[{"stem": "01"}, {"stem": "01"}]', encoding="utf-8")
    with pytest.raises(NonRepeatingError):
        load_schedule(path)

    path.write_text('{"target": ":0"}', encoding="utf-8")
    with pytest.raises(MalformedInputError):
        load_schedule(path)


def test_pointed_set_json():
    s = PointedSet(cylinder("0"), {Point.parse(":1")}, {Point.parse(":0")})
    data = pointed_set_to_json(s)
    assert data == {"body": {"0": "F", "1": "E"}, "extras": [":1"], "holes": [":0"]}
    assert pointed_set_from_json(data) == s
    assert pointed_set_from_json({"body": "E"}) == PointedSet()
    with pytest.raises(MalformedInputError):
        pointed_set_from_json({"extras": []})


def test_formal_distance_text():
    d = FormalDistance.from_positions([OrdinalIndex(0, 2), OrdinalIndex(1, 1)])
    assert formal_distance_to_text(d) == "1@(0,2)+1@(1,1)"
    assert formal_distance_from_text("1@(0,2)+1@(1,1)") == d


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'


def test_write_text(tmp_path, capsys):
    target = tmp_path / "nested" / "out.txt"
    write_text("hello\n", target)
    assert target.read_text(encoding="utf-8") == "hello\n"
    write_text("to stdout\n", None)
    assert capsys.readouterr().out == "to stdout\n"
