# Copyright 2026 The FAE Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import csv
import io
import json

import jsonschema
import pytest

GOLDEN_ARGS = ["explain", "--model", "models/depth3_tree.json", "--data", "data/synthetic.csv",
               "--row", "0", "--estimator", "permutation:20", "--n-references", "200",
               "--seed", "1"]


def schema(source_dir, name):
    return json.loads((source_dir / "schemas" / name).read_text())


def test_golden_report_bytes(run, source_dir):
    proc = run(*GOLDEN_ARGS, check=True)
    golden = (source_dir / "tests/golden/synthetic_perm20_n200_seed1.json").read_text()
    assert proc.stdout == golden


def test_golden_report_schema_and_intervals(run, source_dir):
    report = json.loads(run(*GOLDEN_ARGS, check=True).stdout)
    jsonschema.validate(report, schema(source_dir, "report.schema.json"))
    for f in report["summary"]["mean"]["features"]:
        assert f["ci_lo"] <= f["mean"] <= f["ci_hi"]
    assert abs(report["summary"]["mean"]["additivity_residual"]) < 1e-9


@pytest.mark.parametrize("extra", [
    ["--reference", "uniform"],
    ["--reference", "joint-marginal", "--emit-rows"],
    ["--game", "conditional"],
    ["--game", "single-ref", "--reference", "point:0,0"],
    ["--reference", "uniform", "--n-references", "50", "--seed", "2", "--estimator",
     "coalition:8", "--summary", "mean,quantiles,clusters:3", "--emit-rows"],
    ["--summary", "quantiles"],
])
def test_toy_reports_validate(run, source_dir, extra):
    proc = run("explain", "--model", "f_both", "--data", "data/mover.csv", "--input", "1,1",
               *extra, check=True)
    jsonschema.validate(json.loads(proc.stdout), schema(source_dir, "report.schema.json"))


def test_uniform_ime_row(run):
    report = json.loads(run("explain", "--model", "f_both", "--data", "data/mover.csv",
                            "--input", "1,1", "--reference", "uniform", check=True).stdout)
    assert [f["mean"] for f in report["summary"]["mean"]["features"]] == [0.375, 0.375]
    assert report["summary"]["mean"]["baseline"] == 0.25


def test_floats_have_17_significant_digits(run):
    text = run("explain", "--model", "f_both", "--data", "data/mover.csv", "--input", "1,1",
               "--reference", "joint-marginal", check=True).stdout
    assert "0.47499999999999998" in text or "0.47500000000000003" in text


def test_plot_data(run, tmp_path):
    plot = tmp_path / "plot.csv"
    run("explain", "--model", "f_both", "--data", "data/mover.csv", "--input", "1,1",
        "--reference", "uniform", "--plot-data", str(plot), check=True)
    rows = list(csv.DictReader(io.StringIO(plot.read_text())))
    assert [r["reference_index"] for r in rows] == ["0", "1", "2", "3"]
    assert sum(float(r["weight"]) for r in rows) == pytest.approx(1.0)
    assert {float(r["male"]) for r in rows} == {0.0, 0.5, 1.0}


def test_threads_do_not_change_output(run, tmp_path):
    outs = []
    for threads in ["1", "4", "1"]:
        outs.append(run(*GOLDEN_ARGS, "--threads", threads, "--summary", "mean,clusters",
                        check=True).stdout)
    assert outs[0] == outs[1] == outs[2]


@pytest.mark.parametrize("args,code,cls", [
    (["explain", "--model", "f_both", "--data", "data/mover.csv", "--input", "1,1",
      "--reference", "filtered:male > 4"], 3, "empty_contrast_class"),
    (["explain", "--model", "f_both", "--input", "1,1", "--reference", "uniform"], 2,
     "config_error"),
    (["explain", "--model", "f_both", "--data", "data/missing.csv", "--input", "1,1"], 2,
     "config_error"),
    (["explain", "--model", "f_both", "--data", "data/mover.csv", "--input", "1,1",
      "--n-references", "10"], 2, "config_error"),
    (["explain", "--model", "f_both", "--data", "data/mover.csv", "--input", "1"], 3, None),
    (["explain", "--model", "f_both", "--data", "data/mover.csv", "--input", "1,1",
      "--estimator", "bogus"], 2, "config_error"),
    (["explain", "--model", "f_both", "--data", "data/synthetic.csv", "--input", "1,1"], 3, None),
    (["explain", "--model-command", "/nonexistent/model", "--data", "data/mover.csv",
      "--input", "1,1"], 4, "model_error"),
    (["explain", "--bogus-flag"], 2, None),
    (["axiom-audit", "--model", "models/depth3_tree.json", "--data", "data/synthetic.csv",
      "--row", "0", "--game", "conditional"], 2, "config_error"),
    (["axiom-audit", "--model", "f_male", "--data", "data/synthetic.csv", "--row", "0"], 3,
     "schema_error"),
])
def test_exit_codes(run, args, code, cls):
    proc = run(*args)
    assert proc.returncode == code, proc.stderr
    if cls is not None:
        # The last line is ours; an external child may have written above it.
        lines = proc.stderr.strip().splitlines()
        assert lines[-1].startswith("error: " + cls + ": ")
        assert sum(line.startswith("error: ") for line in lines) == 1


def test_toy_table_command(run):
    proc = run("toy-table", check=True)
    assert "0.472" in proc.stdout and "0.475" in proc.stdout
    assert "all 16 cells match" in proc.stdout


def test_axiom_audit_reports(run, source_dir):
    audit_schema = schema(source_dir, "audit.schema.json")
    male_uniform = json.loads(run("axiom-audit", "--model", "f_male", "--data", "data/mover.csv",
                                  "--input", "1,1", check=True).stdout)
    jsonschema.validate(male_uniform, audit_schema)
    assert male_uniform["phi"][1] == 0.0
    assert male_uniform["dummy_features"] == ["lift"]

    cond = json.loads(run("axiom-audit", "--model", "f_male", "--data", "data/mover.csv",
                          "--input", "1,1", "--game", "conditional", check=True).stdout)
    jsonschema.validate(cond, audit_schema)
    assert cond["insensitivity"]["irrelevant_features"] == ["lift"]
    assert cond["insensitivity"]["known_conditional_game_violation"] is True
    assert abs(cond["phi"][1] - 0.05) < 1e-12

    both = json.loads(run("axiom-audit", "--model", "f_both", "--data", "data/mover.csv",
                          "--input", "1,1", check=True).stdout)
    symmetry = [a for a in both["axioms"] if a["axiom"] == "symmetry"][0]
    assert symmetry["passed"]


def test_external_model_matches_builtin(run, model_server):
    common = ["--data", "data/mover.csv", "--input", "1,1", "--reference", "uniform"]
    ext = json.loads(run("explain", "--model-command", f"'{model_server}' f_both", *common,
                         check=True).stdout)
    builtin = json.loads(run("explain", "--model", "f_both", *common, check=True).stdout)
    assert ext["summary"] == builtin["summary"]


def test_python_example_server(run, source_dir):
    server = source_dir / "tools" / "example_model_server.py"
    common = ["--data", "data/mover.csv", "--input", "1,1", "--reference", "uniform"]
    ext = json.loads(run("explain", "--model-command", f"python3 '{server}' f_both", *common,
                         check=True).stdout)
    assert [f["mean"] for f in ext["summary"]["mean"]["features"]] == [0.375, 0.375]
