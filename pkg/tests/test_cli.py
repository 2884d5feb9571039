import json
import subprocess
import sys

import pytest

from nielsen.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_describe(capsys):
    code, out, _ = call(capsys, "describe", "--group", "dihedral:5", "--format", "json")
    d = json.loads(out)
    assert code == 0
    assert (d["order"], d["mu"], d["ell"], d["psi"], d["center_order"], d["conjugacy_classes"]) == (10, 2, 2, 11, 1, 4)
    assert d["legend"][0] == "1"


def test_describe_large_group_skips_ell(capsys):
    code, out, _ = call(capsys, "describe", "--group", "bgroup", "--format", "csv")
    assert code == 0
    header, row = out.strip().splitlines()
    assert dict(zip(header.split(","), row.split(",")))["ell"] == ""


def test_classify_by_n_and_genus(capsys):
    code, out, _ = call(capsys, "classify", "--group", "alt:5", "--n", "2", "--format", "json")
    assert code == 0 and json.loads(out)["class_count"] == 3
    code, out, _ = call(capsys, "classify", "--group", "alt:5", "--genus", "61", "--weak", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["class_count"] == 2 and d["mode"] == "weak" and d["genus"] == 61
    code, out, _ = call(capsys, "classify", "--group", "dihedral:5", "--n", "2")
    assert "classes: 2" in out


def test_classify_no_action(capsys):
    code, _, err = call(capsys, "classify", "--group", "dihedral:5", "--genus", "12")
    assert code == 2 and "no free action" in err


def test_capacity_exit_code(capsys):
    code, _, err = call(capsys, "classify", "--group", "alt:6", "--n", "4")
    assert code == 3 and "invariant_lower_bound" in err


def test_parse_error_exit_code(capsys):
    code, _, err = call(capsys, "describe", "--group", "dihedral:1")
    assert code == 2 and "position" in err
    code, _, _ = call(capsys, "classify", "--group", "dihedral:5")
    assert code == 2


def test_cache_dir(tmp_path, capsys):
    args = ["classify", "--group", "dihedral:5", "--n", "2", "--cache-dir", str(tmp_path), "--format", "json"]
    _, first, _ = call(capsys, *args)
    files = list(tmp_path.glob("*.noc"))
    assert len(files) == 1 and files[0].name.endswith("-n2-nielsen.noc")
    _, second, _ = call(capsys, *args)
    assert json.loads(first) == json.loads(second)
    files[0].write_bytes(b"junk")
    code, third, err = call(capsys, *args)
    assert code == 0 and "warning" in err and json.loads(third) == json.loads(first)


def test_cache_dir_from_environment(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("NIELSEN_CACHE_DIR", str(tmp_path))
    call(capsys, "classify", "--group", "cyclic:5", "--n", "1")
    assert list(tmp_path.glob("*.noc"))


def test_equivalent_and_replay(tmp_path, capsys):
    code, out, _ = call(capsys, "equivalent", "--group", "alt:5", "--v", "1,15", "--w", "15,1", "--trace",
                        "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["equivalent"]
    f = tmp_path / "t.json"
    f.write_text(json.dumps(d))
    code, out, _ = call(capsys, "replay", str(f))
    assert code == 0 and "replays" in out
    d["trace"]["end"] = d["trace"]["start"][::-1] if d["trace"]["start"] != d["trace"]["end"] else [0, 0]
    d["trace"]["moves"].append({"variant": "Invert", "j": 0})
    f.write_text(json.dumps(d))
    code, out, _ = call(capsys, "replay", str(f))
    assert code == 1


def test_equivalent_text(capsys):
    code, out, _ = call(capsys, "equivalent", "--group", "dihedral:5", "--v", "5,1", "--w", "5,2")
    assert code == 0 and "not Nielsen equivalent" in out


def test_reduce(capsys):
    code, out, _ = call(capsys, "reduce", "--group", "sym:4", "--v", "1,2,3,4", "--tower", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["tower_orders"] == [24, 12, 4, 2, 1]
    code, out, _ = call(capsys, "reduce", "--group", "dihedral:5", "--v", "5,6,7", "--supraminimal",
                        "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["reduced"] == d["minimal_vector"] + [0]
    code, _, err = call(capsys, "reduce", "--group", "dihedral:5", "--v", "5,6", "--supraminimal")
    assert code == 2 and "exceed" in err


def test_stabilize_map(capsys):
    code, out, _ = call(capsys, "stabilize-map", "--group", "dihedral:5", "--n", "2", "--format", "csv")
    assert code == 0 and out.split() == ["from,to", "0,0", "1,0"]


def test_verify_subset(capsys):
    code, out, _ = call(capsys, "verify", "--claims", "1,2", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "number,title,status,seconds"
    assert [l.split(",")[2] for l in lines[1:]] == ["pass", "pass"]


def test_verify_budget_failure_exit(capsys):
    code, out, _ = call(capsys, "verify", "--claims", "1", "--budget-seconds", "-1")
    assert code == 1 and "SKIPPED" in out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "nielsen", "describe", "--group", "cyclic:3", "--format", "json"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["mu"] == 1
