import json
import subprocess
import sys

import pytest

from adelic.cli import main

SEQS = {
    "ex24": {"field": "Kz", "terms": [
        {"poly": ["1"], "root": "1/2"}, {"poly": ["1"], "root": "-1/2"},
        {"poly": ["1"], "root": "5"}, {"poly": ["2"], "root": ["0", "5"]},
        {"poly": ["3"], "root": ["-5", "-5"]}]},
    "two": {"terms": [{"poly": ["1"], "root": "2"}, {"poly": ["1"], "root": "1"}]},
    "unst": {"terms": [{"poly": ["1"], "root": "2"}, {"poly": ["1"], "root": "-2"},
                       {"poly": ["1"], "root": "1"}]},
    "n": {"terms": [{"poly": ["0", "1"], "root": "1"}]},
    "m2": {"xi_product": ["2"]},
}


def manifest(tasks):
    return {"version": 1, "fields": {"Kz": {"min_poly": ["1", "1", "1"]}}, "sequences": SEQS, "tasks": tasks}


def run(tmp_path, tasks, *extra, raw=None):
    path = tmp_path / "m.json"
    path.write_text(raw if raw is not None else json.dumps(manifest(tasks)))
    out = tmp_path / "out"
    code = main(["--manifest", str(path), "--out", str(out), *extra])
    return code, out


def load(out, tid):
    return json.loads((out / f"{tid}.json").read_text())["result"]


def test_stability_task(tmp_path):
    code, out = run(tmp_path, [{"id": "s", "type": "stability", "sequence": "ex24", "place": "2:0"}])
    assert code == 0
    res = load(out, "s")
    assert res["stable"] is False and res["witness"] == 1


def test_bmw_task(tmp_path):
    code, out = run(tmp_path, [{"id": "b", "type": "classify-bmw", "curves": [{"xi": "2", "S": ["3:0"]}]}])
    assert code == 0
    res = load(out, "b")
    assert res["kind"] == "NaturalBoundary"
    assert res["radius"]["lo"] == "1/2" == res["radius"]["hi"]


def test_malformed_manifest(tmp_path, capsys):
    code, _ = run(tmp_path, None, raw='{"version": 1,\n "tasks": [}')
    assert code == 1
    assert "line 2" in capsys.readouterr().err


def test_unknown_key_rejected(tmp_path, capsys):
    code, _ = run(tmp_path, [{"id": "s", "type": "stability", "sequence": "ex24", "place": "2:0", "bogus": 1}])
    assert code == 1
    assert "bogus" in capsys.readouterr().err


def test_unresolved_reference(tmp_path, capsys):
    code, _ = run(tmp_path, [{"id": "s", "type": "stability", "sequence": "nope", "place": "2:0"}])
    assert code == 1
    assert "nope" in capsys.readouterr().err


def test_floats_rejected(tmp_path):
    bad = manifest([{"id": "z", "type": "zeta", "xi": [2.5], "p": 5}])
    code, _ = run(tmp_path, None, raw=json.dumps(bad))
    assert code == 1


def test_stability_error_exit(tmp_path):
    code, out = run(tmp_path, [{"id": "m", "type": "classify-main", "base": "unst",
                                "factors": [{"sequence": "n", "place": "2:0"}]}])
    assert code == 1
    assert load(out, "m")["error"] == "StabilityError"


def test_budget_surfaces_as_undecided(tmp_path):
    code, out = run(tmp_path, [{"id": "e", "type": "ec-verify", "curve": {"p": 5, "a4": 1, "a6": 1},
                                "k_max": 4}], "--budget-enum", "200")
    assert code == 2
    assert load(out, "e")["kind"] == "Undecided"


ALL = [
    {"id": "st", "type": "stability", "sequence": "ex24", "place": "inf:0"},
    {"id": "ce", "type": "certificate", "sequence": "n", "place": "2:0", "depth": 3, "verify_samples": 3},
    {"id": "cm", "type": "classify-main", "base": "m2", "factors": [{"sequence": "m2", "place": "3:0"}]},
    {"id": "rw", "type": "classify-rw", "base": "two", "u": "m2", "places": ["5:0"], "c": ["1/2"]},
    {"id": "ze", "type": "zeta", "xi": ["2", "3"], "p": 2, "N": 5},
    {"id": "ec", "type": "ec-verify", "curve": {"p": 5, "a4": 0, "a6": 1}, "k_max": 2},
    {"id": "se", "type": "series", "source": {"base": "two", "factors": [{"sequence": "n", "place": "2:0"}]},
     "N": 4},
    {"id": "pa", "type": "pade-scan", "source": {"base": "two"}, "N": 40, "orders": [[2, 2], [3, 3]]},
    {"id": "s1", "type": "step1-check", "source": {"base": "two", "factors": [{"sequence": "n", "place": "2:0"}]},
     "bad": [0], "d": 2, "N": 32},
]


def test_all_task_types_and_determinism(tmp_path):
    code, out = run(tmp_path, ALL)
    assert code == 0
    assert load(out, "st")["section_coefficients"]["0"] == "6/1"
    assert load(out, "cm")["kind"] == "NaturalBoundary"
    assert load(out, "se")["coefficients"] == ["2/1", "3/1", "5/2", "9/1"]
    assert load(out, "ze")["fixed_points"][0] == "2/1"
    first = {p.name: p.read_bytes() for p in out.iterdir()}
    again = tmp_path / "again"
    again.mkdir()
    code2, out2 = run(again, ALL, "--jobs", "3")
    assert code2 == 0
    second = {p.name: p.read_bytes() for p in out2.iterdir()}
    assert first == second


def test_csv_output(tmp_path):
    code, out = run(tmp_path, ALL[6:8], "--format", "csv")
    assert code == 0
    assert (out / "se.csv").read_text().splitlines()[:3] == ["n,value", "0,2/1", "1,3/1"]
    rows = (out / "pa.csv").read_text().splitlines()
    assert rows[0] == "L,M,re,im" and len(rows) > 2


def test_module_entry_point(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps(manifest(ALL[:1])))
    proc = subprocess.run([sys.executable, "-m", "adelic", "--manifest", str(path), "--out", str(tmp_path / "o")],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "st: stability -> Stable" in proc.stdout
