import json
import subprocess
import sys
from pathlib import Path

import pytest

from cantorlab.cantortrie import from_cylinders
from cantorlab.cli import main
from cantorlab.reports import STAGE_COLUMNS
from cantorlab.serialization import complex_to_json

REPO = Path(__file__).resolve().parents[1]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_json(path, value):
    path.write_text(json.dumps(value), encoding="utf-8")
    return path


def test_empty_schedule_echoes_the_initial_complex(capsys, tmp_path):
    schedule = write_json(tmp_path / "empty.json", [])
    code, out, _ = run(capsys, "construct", "--initial", "0,11", "--schedule", str(schedule))
    assert code == 0
    report = json.loads(out)
    assert report["command"] == "construct"
    assert report["final"]["complex"] == complex_to_json(from_cylinders(["0", "11"]))
    assert report["final"]["measure"] == "3/4"
    assert report["stages"] == []


def test_dense_schedule_file(capsys, tmp_path):
    records = [{"target": t, "r": 1} for t in (":0", "01:0", "10:0", "11:0")]
    schedule = write_json(tmp_path / "dense.json", records)
    code, out, _ = run(capsys, "construct", "--schedule", str(schedule), "--depth", "2")
    assert code == 0
    report = json.loads(out)
    assert report["deleted"] == ["00", "0100", "10", "1100"]
    assert [s["measure"] for s in report["stages"]] == ["3/4", "11/16", "7/16", "3/8"]
    assert report["checks"]["schedule_dense_at_depth"]
    assert report["checks"]["final_nowhere_dense_at_depth"]


def test_csv_output_is_the_stage_table(capsys, tmp_path):
    schedule = write_json(tmp_path / "one.json", [{"target": ":0", "r": 1}])
    code, out, _ = run(capsys, "construct", "--schedule", str(schedule), "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == ",".join(STAGE_COLUMNS)


def test_repeated_stem_exits_with_precondition_code(capsys, tmp_path):
    schedule = write_json(tmp_path / "repeat.json", [{"target": ":0", "r": 1}, {"stem": "00"}])
    code, out, err = run(capsys, "construct", "--schedule", str(schedule))
    assert code == 3
    assert out == ""
    payload = json.loads(err)
    assert payload["error"] == "NonRepeatingError"
    assert payload["exit_code"] == 3


def test_malformed_schedule_reports_line_and_column(capsys, tmp_path):
    schedule = tmp_path / "broken.json"
    schedule.write_text("[\n  }\n]", encoding="utf-8")
    code, _, err = run(capsys, "construct", "--schedule", str(schedule))
    assert code == 2
    assert "line 2, column 3" in json.loads(err)["message"]


def test_bisection_budget_exit_carries_the_trace(capsys):
    code, _, err = run(capsys, "bisect", "--point", ":01", "--max-steps", "5")
    assert code == 4
    payload = json.loads(err)
    assert payload["error"] == "BudgetExceededError"
    assert len(payload["trace"]) == 5


def test_bisect_locates_a_dyadic_point(capsys):
    code, out, _ = run(capsys, "bisect", "--point", "011:0")
    assert code == 0
    report = json.loads(out)
    assert (report["member"], report["steps"]) == (True, 3)
    assert [t["branch"] for t in report["trace"]] == ["L", "R", "HIT"]


@pytest.mark.parametrize("argv", [["verify", "bogus"], ["construct", "--bogus"], [], ["naturals"]])
def test_usage_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert json.loads(err)["error"] == "UsageError"


def test_verify_naturals_suite_passes(capsys):
    code, out, _ = run(capsys, "verify", "naturals", "--samples", "3")
    assert code == 0
    assert json.loads(out)["suites"]["naturals"]["passed"] is True


def test_verify_text_summary(capsys):
    code, out, _ = run(capsys, "verify", "naturals", "--samples", "3", "--format", "text")
    assert code == 0
    assert "property" in out.splitlines()[0]


def test_classify_two_isolated_points(capsys):
    code, out, _ = run(capsys, "classify", "--initial", "empty", "--extras", ":0,:1", "--horizon", "3")
    assert code == 0
    report = json.loads(out)
    assert report["class"] == "Finite(2)"
    assert report["count"] == 2


def test_naturals_command(capsys):
    code, out, _ = run(capsys, "naturals", "--bound", "10", "--delete", "3,5", "--topology")
    assert code == 0
    report = json.loads(out)
    assert report["remainder_size"] == 5
    assert report["empties_in_limit"] is False
    assert all(report["topology"].values())


@pytest.mark.parametrize("extra, empties", [([], False), (["--cofinal"], True)])
def test_naturals_cofinal_flag(capsys, extra, empties):
    code, out, _ = run(capsys, "naturals", "--bound", "10", "--delete", "10", *extra)
    assert code == 0
    report = json.loads(out)
    assert report["remainder_size"] == 0
    assert report["empties_in_limit"] is empties


def test_naturals_rejects_non_integer_cutoffs(capsys):
    code, _, _ = run(capsys, "naturals", "--bound", "10", "--delete", "3,x")
    assert code == 2


def test_verify_p_command(capsys):
    code, out, _ = run(capsys, "verify-p", "--initial", "full", "--depth", "2")
    assert code == 0
    assert json.loads(out)["max_k_nonempty"] == 3


def test_export_full_as_dot(capsys):
    code, out, _ = run(capsys, "export", "--initial", "full")
    assert code == 0
    assert out == 'digraph "complex" {\n  node [fontname=monospace];\n  "n" [label="ε" shape=box style="filled"];\n}\n'


def test_export_reads_a_construction_report(capsys, tmp_path):
    schedule = write_json(tmp_path / "one.json", [{"target": ":0", "r": 1}])
    report = tmp_path / "out" / "report.json"
    assert main(["construct", "--schedule", str(schedule), "--output", str(report)]) == 0
    code, out, _ = run(capsys, "export", "--report", str(report))
    assert code == 0
    assert "dashed" in out


def test_dot_format_is_refused_where_there_is_no_graph(capsys):
    code, _, _ = run(capsys, "naturals", "--bound", "4", "--format", "dot")
    assert code == 2


def test_sweep_is_deterministic_and_sorted(tmp_path):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    for target in (first, second):
        argv = ["construct", "--sweep", "4", "--depth", "2", "--seed", "11", "--workers", "3", "--output", str(target)]
        assert main(argv) == 0
    assert first.read_text(encoding="utf-8") == second.read_text(encoding="utf-8")
    runs = json.loads(first.read_text(encoding="utf-8"))["sweep"]
    assert len(runs) == 4
    keys = [r["schedule_sha256"] for r in runs]
    assert keys == sorted(keys)
    assert all(r["checks"]["schedule_dense_at_depth"] for r in runs)


def test_module_entrypoint_writes_json(tmp_path):
    target = tmp_path / "preserve.json"
    proc = subprocess.run(
        [sys.executable, "-m", "cantorlab", "preserve", "--avoid", ":0", "--keep", ":1", "--output", str(target)],
        cwd=REPO,
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0, proc.stderr
    report = json.loads(target.read_text(encoding="utf-8"))
    assert report["witnesses"] == [":1", "01:0"]
