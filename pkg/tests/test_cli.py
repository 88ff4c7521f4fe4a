import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from diamatch.cli import main
from diamatch.io import write_instance
from diamatch.matching import Instance

SVG = "{http://www.w3.org/2000/svg}"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def example(tmp_path):
    path = tmp_path / "ex.json"
    write_instance(Instance(((0, 0), (2, 0)), ((3, 0), (-1, 0))), path)
    return path


def test_match_report_and_svg(capsys, tmp_path, example):
    svg = tmp_path / "m.svg"
    code, out, _ = run(capsys, "match", str(example), "--svg", str(svg))
    assert code == 0
    rep = json.loads(out)
    assert rep["weight"] == 18 and rep["feasible"] and rep["perm"] == [0, 1]
    root = ET.parse(svg).getroot()
    circles = root.findall(f"{SVG}circle")
    lines = root.findall(f"{SVG}line")
    # 2 disks + 4 points + 1 witness, 2 matching segments
    assert len(circles) == 7 and len(lines) == 2


def test_match_single_pair(capsys, tmp_path):
    path = tmp_path / "one.json"
    write_instance(Instance(((0, 0),), ((4, 0),)), path)
    out = tmp_path / "r.json"
    code, _, _ = run(capsys, "match", str(path), "--json", str(out))
    rep = json.loads(out.read_text())
    assert code == 0 and rep["witness"] == [2.0, 0.0] and rep["slack"] == -2.0


def test_match_input_errors(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"version": 1, "reds": [[0, 0]], "blues": [[1, 1], [2, 2]]}))
    code, _, err = run(capsys, "match", str(bad))
    assert code == 2 and "equal size" in err
    code, _, err = run(capsys, "match", str(tmp_path / "missing.json"))
    assert code == 2
    csv = tmp_path / "bad.csv"
    csv.write_text("color,x,y\nred,0,zz\n")
    code, _, err = run(capsys, "match", str(csv))
    assert code == 2 and "line 2" in err


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--seeds", "0"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["experiment", "--tol", "-1"])
    assert exc.value.code == 2
    code, _, err = run(capsys, "experiment", "--strategies", "max-sq,bogus", "--seeds", "2")
    assert code == 2 and "bogus" in err
    code, _, _ = run(capsys, "lemmas", "--only", "lemma9", "--seeds", "2")
    assert code == 2
    code, _, err = run(capsys, "counterexample", "--kind", "kgon", "--k", "8")
    assert code == 2 and "4q + 2" in err


def test_verify_and_replay(capsys):
    code, out, err = run(capsys, "verify", "--n-min", "2", "--n-max", "9", "--seeds", "24")
    assert code == 0
    rep = json.loads(out)
    s = rep["summary"]
    assert s["count"] == 24 and s["passed"] + s["failed"] == s["count"]
    assert s["worst_slack"] == max(r["slack"] for r in rep["instances"])
    code, again, _ = run(capsys, "verify", "--n-min", "2", "--n-max", "9", "--seeds", "24")
    assert again == out
    code, one, _ = run(capsys, "verify", "--n-min", "2", "--n-max", "9", "--replay", "13")
    assert json.loads(one)["instances"][0] == rep["instances"][13]
    code, two, _ = run(capsys, "verify", "--n-min", "2", "--n-max", "9", "--replay", "13")
    assert one == two


def test_verify_collinear_branch(capsys):
    code, out, _ = run(capsys, "verify", "--n-min", "2", "--n-max", "2", "--seeds", "20",
                       "--dist", "axis")
    assert code == 0 and json.loads(out)["summary"]["failed"] == 0


def test_lemmas_only_and_dump(capsys, tmp_path):
    code, out, _ = run(capsys, "lemmas", "--only", "lemma6", "--seeds", "20",
                       "--dump-failures", str(tmp_path / "dump"))
    rep = json.loads(out)
    assert code == 0 and list(rep["suites"]) == ["lemma6"]
    assert rep["suites"]["lemma6"]["passed"] == 20
    assert not (tmp_path / "dump").exists()


def test_lemma_failures_are_dumped(tmp_path, monkeypatch):
    from diamatch import campaigns

    monkeypatch.setitem(campaigns.SUITES, "lemma1", lambda seed, tol: (seed != 1, 0.0, {"s": seed}))
    rep = campaigns.run_lemmas(3, ["lemma1"], dump_failures=tmp_path)
    assert rep["suites"]["lemma1"]["failed_seeds"] == [1]
    assert json.loads((tmp_path / "lemma1-seed1.json").read_text())["config"] == {"s": 1}


def test_counterexample_commands(capsys, tmp_path):
    svg = tmp_path / "k.svg"
    code, out, _ = run(capsys, "counterexample", "--kind", "kgon", "--k", "6", "--svg", str(svg))
    rep = json.loads(out)
    assert code == 0 and rep["all_disjoint"] and rep["disjoint"] == [True, True]
    root = ET.parse(svg).getroot()
    assert len(root.findall(f"{SVG}polygon")) == 4
    assert all(len(p.get("points").split()) == 6 for p in root.findall(f"{SVG}polygon"))
    code, out, _ = run(capsys, "counterexample", "--kind", "segment")
    rep = json.loads(out)
    assert code == 0 and rep["some_non_intersecting"] and not rep["convex_position"]


def test_experiment_csv(capsys, tmp_path):
    path = tmp_path / "e.csv"
    code, _, err = run(capsys, "experiment", "--strategies", "max-sq,random,local2swap",
                       "--n-min", "4", "--n-max", "8", "--seeds", "30", "--out", str(path))
    lines = path.read_text().splitlines()
    assert code == 0
    assert lines[0] == "strategy,n,seed,weight,feasible,slack,relative_slack,pairwise_rate"
    assert len(lines) == 1 + 90
    rows = [l.split(",") for l in lines[1:]]
    assert all(r[4] == "true" for r in rows if r[0] == "max-sq")
    assert all(float(r[7]) == 1.0 for r in rows if r[0] == "local2swap")


def test_random_strategy_is_not_always_feasible():
    from diamatch.campaigns import run_experiment

    rows = run_experiment(["random"], 8, 8, 200)
    rate = sum(r["feasible"] for r in rows) / len(rows)
    assert rate < 1.0


def test_env_tolerance(capsys, monkeypatch, example):
    monkeypatch.setenv("DIAMATCH_TOL", "1e-6")
    _, out, _ = run(capsys, "match", str(example))
    assert json.loads(out)["tol"] == 1e-6
    _, out, _ = run(capsys, "match", str(example), "--tol", "1e-7")
    assert json.loads(out)["tol"] == 1e-7


def test_module_entry_point(example):
    res = subprocess.run([sys.executable, "-m", "diamatch", "match", str(example)],
                         capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["weight"] == 18


def test_parallel_reports_identical(capsys):
    args = ["verify", "--n-min", "2", "--n-max", "12", "--seeds", "40"]
    _, serial, _ = run(capsys, *args)
    _, parallel, _ = run(capsys, *args, "--jobs", "3")
    assert serial == parallel
    eargs = ["experiment", "--strategies", "max-sq,greedy", "--seeds", "20"]
    _, serial, _ = run(capsys, *eargs)
    _, parallel, _ = run(capsys, *eargs, "--jobs", "3")
    assert serial == parallel
