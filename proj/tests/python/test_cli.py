"""End-to-end tests of the command-line interface (subprocess level)."""

import json
import math
import os
import subprocess

import pytest

CLI = os.environ["ROUTESPEC_CLI"]
DATA = os.environ["ROUTESPEC_DATA"]
SCHEMA = os.environ["ROUTESPEC_SCHEMA"]

TOY_LP = """Maximize
 obj: 5 x1 + 5 x2 + 2 x3 + 5 x4 + 5 x5
Subject To
 c1: x1 + x2 = 1
 c2: - x1 + x3 + x4 = 0
 c3: - x2 - x3 + x5 = 0
 c4: - x4 - x5 = -1
Bounds
 x1 >= 0
 x2 >= 0
 x3 >= 0
 x4 >= 0
 x5 >= 0
End
"""


def data(name):
    return os.path.join(DATA, name)


def run(*args, env=None, expect=0):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    proc = subprocess.run(
        [CLI, *args], capture_output=True, text=True, env=full_env
    )
    assert proc.returncode == expect, (proc.returncode, proc.stdout, proc.stderr)
    return proc


def stderr_error(proc):
    return json.loads(proc.stderr)["error"]


def analyze(*args, **kwargs):
    return json.loads(run("analyze", *args, **kwargs).stdout)


def test_analyze_reference_numbers():
    doc = analyze(data("toy.json"))
    assert doc["network"]["start_node"] == "n1"
    assert doc["network"]["finish_node"] == "n4"
    assert doc["schedule"]["completion_time"] == 12.0
    assert doc["schedule"]["path_durations"] == [10.0, 12.0, 10.0]
    assert doc["schedule"]["critical_paths"] == [
        {"index": 1, "activities": ["A1", "A3", "A5"]}
    ]
    assert doc["schedule"]["total_float"] == [0.0, 2.0, 0.0, 2.0, 0.0]
    assert doc["schedule"]["early_times"] == {"n1": 0.0, "n2": 5.0, "n3": 7.0, "n4": 12.0}
    assert doc["svd"]["numerical_rank"] == 3
    sv = doc["svd"]["singular_values"]
    assert abs(sv[0] - 2.0) < 1e-9
    assert abs(sv[1] - math.sqrt(2.0)) < 1e-9
    assert abs(sv[2] - 1.0) < 1e-9
    assert doc["relevance"]["top_paths"] == [1]
    assert doc["relevance"]["top_activities"] == ["A1", "A5"]
    assert doc["spectral"]["minimal_order"] == 2
    assert doc["nullspace"]["vectors"] == [[-1, 0, 1, 1, 0], [0, -1, -1, 0, 1]]
    assert doc["reachability"]["reachable"] is True
    assert "stress" not in doc
    assert "target" not in doc


def test_analyze_target_tau():
    doc = analyze(data("toy.json"), "--target-tau", "10,12,10")
    target = doc["target"]
    assert target["reachability"]["reachable"] is True
    assert target["has_negative"] is False
    for got, want in zip(target["least_squares_durations"], [5.5, 4.5, 1.0, 4.5, 5.5]):
        assert abs(got - want) < 1e-9


def test_analyze_output_is_byte_deterministic():
    first = run("analyze", data("toy_max.json"), "--target-tau", "10,12,10")
    second = run("analyze", data("toy_max.json"), "--target-tau", "10,12,10")
    assert first.stdout == second.stdout
    assert first.stdout.endswith("\n")


def test_analyze_reports_match_schema():
    jsonschema = pytest.importorskip("jsonschema")
    with open(SCHEMA, encoding="utf-8") as f:
        schema = json.load(f)
    docs = [
        analyze(data("toy.json")),
        analyze(data("toy_max.json"), "--target-tau", "1,2,3"),
        analyze(data("single.json")),
        analyze(data("two_sources.json"), "--add-virtual-terminals"),
    ]
    for doc in docs:
        jsonschema.validate(doc, schema)


def test_analyze_text_format():
    out = run("analyze", data("toy.json"), "--format", "text").stdout
    assert "completion time: 12\n" in out
    assert "path 1: A1 A3 A5 (duration 12) [critical]\n" in out
    assert "nullspace dimension: 2\n" in out


def test_analyze_floats_csv(tmp_path):
    out_path = tmp_path / "floats.csv"
    run("analyze", data("toy.json"), "--floats-csv", str(out_path))
    assert out_path.read_text() == (
        "activity,total_float\nA1,0\nA2,2\nA3,0\nA4,2\nA5,0\n"
    )


def test_csv_input_matches_json_input():
    assert analyze(data("toy.csv")) == analyze(data("toy.json"))


def test_paths_csv_golden():
    out = run("paths", data("toy.json"), "--format", "csv").stdout
    assert out == "A1,A2,A3,A4,A5\n0,1,0,0,1\n1,0,1,0,1\n1,0,0,1,0\n"


def test_paths_text():
    out = run("paths", data("toy.json"), "--format", "text").stdout
    assert out.startswith("3 paths\n")
    assert "path 0: A2 A5\n" in out


def test_budget_flag_and_env():
    proc = run("paths", data("toy.json"), "--max-paths", "2", expect=2)
    err = stderr_error(proc)
    assert err["kind"] == "budget"
    assert err["code"] == 2
    assert err["count"] == 3
    assert err["budget"] == 2

    run("paths", data("toy.json"), env={"ROUTESPEC_MAX_PATHS": "2"}, expect=2)
    # An explicit flag wins over the environment.
    run(
        "paths",
        data("toy.json"),
        "--max-paths",
        "100",
        env={"ROUTESPEC_MAX_PATHS": "2"},
    )


def test_nullspace_outputs():
    doc = json.loads(run("nullspace", data("toy.json")).stdout)
    assert doc["dimension"] == 2
    assert doc["exact_rank"] == 3
    assert doc["vectors"] == [[-1, 0, 1, 1, 0], [0, -1, -1, 0, 1]]
    csv = run("nullspace", data("toy.json"), "--format", "csv").stdout
    assert csv == "-1,0,1,1,0\n0,-1,-1,0,1\n"


def test_svd_subcommand():
    doc = json.loads(run("svd", data("toy.json")).stdout)
    assert doc["numerical_rank"] == 3
    assert abs(doc["singular_values"][0] - 2.0) < 1e-9
    assert len(doc["u"]) == 3 and len(doc["u"][0]) == 3
    assert len(doc["vt"]) == 3 and len(doc["vt"][0]) == 5


def test_pinv_subcommand():
    doc = json.loads(run("pinv", data("toy.json")).stdout)
    eighth = [
        [-1, 2, 3],
        [5, -2, 1],
        [-2, 4, -2],
        [1, -2, 5],
        [3, 2, -1],
    ]
    for i, row in enumerate(doc["pseudoinverse"]):
        for j, value in enumerate(row):
            assert abs(value - eighth[i][j] / 8.0) < 1e-9

    doc = json.loads(
        run("pinv", data("toy.json"), "--target-tau", "0,0,10").stdout
    )
    assert doc["target"]["has_negative"] is True
    assert doc["target"]["reachability"]["reachable"] is True


def test_stress_subcommand():
    doc = json.loads(run("stress", data("toy_max.json")).stdout)
    assert doc["p"] == 2.0
    assert abs(doc["stress"] - math.sqrt(344.0 / 513.0)) < 1e-9

    doc = json.loads(run("stress", data("toy_max.json"), "-p", "inf").stdout)
    assert doc["p"] == "inf"
    assert abs(doc["stress"] - 0.8) < 1e-12

    doc = json.loads(run("stress", data("toy_tight.json"), "-p", "1").stdout)
    assert doc["stress"] == 1.0

    # Without caps the stress is undefined.
    proc = run("stress", data("toy.json"), expect=1)
    err = stderr_error(proc)
    assert err["kind"] == "input"
    assert "max_duration" in err["message"]


def test_spectral_subcommand():
    doc = json.loads(
        run("spectral", data("toy.json"), "--threshold", "0.6").stdout
    )
    assert doc["minimal_order"] == 2

    doc = json.loads(
        run("spectral", data("toy.json"), "--threshold", "0.6", "--order", "1").stdout
    )
    assert doc["reconstruction"] == [[0, 0, 0, 0, 0], [1, 0, 1, 0, 1], [0, 0, 0, 0, 0]]
    assert doc["matches_route_matrix"] is False

    doc = json.loads(
        run("spectral", data("toy.json"), "--threshold", "0.6", "--order", "2").stdout
    )
    assert doc["matches_route_matrix"] is True


def test_lp_export(tmp_path):
    assert run("lp-export", data("toy.json")).stdout == TOY_LP
    out_path = tmp_path / "toy.lp"
    run("lp-export", data("toy.json"), "-o", str(out_path))
    assert out_path.read_text() == TOY_LP


def test_virtual_terminals():
    run("analyze", data("two_sources.json"), expect=1)
    doc = analyze(data("two_sources.json"), "--add-virtual-terminals")
    assert len(doc["network"]["virtual_nodes_added"]) == 2
    assert len(doc["network"]["virtual_activities_added"]) == 4
    assert doc["network"]["start_node"] == doc["network"]["virtual_nodes_added"][0]


def test_input_errors(tmp_path):
    proc = run("analyze", str(tmp_path / "missing.json"), expect=1)
    assert stderr_error(proc)["kind"] == "input"

    proc = run("analyze", data("cycle.json"), expect=1)
    assert "cycle" in stderr_error(proc)["message"]

    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    proc = run("analyze", str(bad), expect=1)
    assert "JSON" in stderr_error(proc)["message"]

    proc = run("analyze", data("toy.json"), "--no-such-flag", expect=1)
    assert stderr_error(proc)["kind"] == "input"


def test_help_and_version():
    assert run("--version").stdout.strip() == "0.1.0"
    out = run("--help").stdout
    for name in ["analyze", "paths", "svd", "nullspace", "pinv", "stress",
                 "lp-export", "spectral"]:
        assert name in out
    run(expect=1)  # a subcommand is required
