import json
import subprocess
import sys

import pytest

from barfill.cli import main, run, torus_check


def call(*argv):
    code, out = run(list(argv))
    return code, (json.loads(out) if out.strip().startswith("{") else out)


def test_homology_command():
    code, out = call("homology", "--group", "cyclic:2", "--n", "1", "--l", "2")
    assert code == 0 and out["dim"] == 1
    assert set(out) >= {"group", "n", "l", "dim", "reps", "ranks"}


def test_isop_command():
    code, out = call("isop", "--group", "cyclic:2", "--n", "1", "--l", "2", "--K", "1",
                     "--mode", "exhaustive")
    assert code == 0 and out["value"] == 1 and out["exact"] and not out["lower_bound"]
    code, out = call("isop", "--group", "cyclic:2", "--K", "2", "--profile")
    assert out["values"] == [0, 1, 0]


def test_group_command():
    code, out = call("group", "--group", "sym:3")
    assert code == 0 and out["order"] == 6 and not out["abelian"]
    assert out["abelianization_invariants"] == [2]


def test_fillnorm_command(tmp_path):
    e = json.dumps({"group": "cyclic:2", "n": 1, "l": 2, "terms": [[1, [0]]]})
    code, out = call("fillnorm", "--chain", e)
    assert code == 0 and out["filler_size"] == 1 and out["exact"]
    assert "nodes_explored" in out
    t = json.dumps({"group": "cyclic:2", "n": 1, "l": 2, "terms": [[1, [1]]]})
    te = json.dumps({"group": "cyclic:2", "n": 1, "l": 2, "terms": [[1, [0]], [1, [1]]]})
    path = tmp_path / "c.json"
    path.write_text(te)
    code, out = call("fillnorm", "--chain", t, "--to", f"@{path}")
    assert code == 0 and out["filler_size"] == 1
    code, _ = call("fillnorm", "--chain", t)       # not a boundary
    assert code == 2
    code, _ = call("fillnorm", "--chain", "{not json")
    assert code == 2


def test_sentences():
    code, out = call("phi", "--group", "cyclic:2", "--K", "1", "--K1", "1", "--K2", "0")
    assert code == 0 and out["holds"] is False            # false, not refused
    code, out = call("phi", "--group", "cyclic:2", "--K", "1", "--K1", "1", "--K2", "1")
    assert out["holds"] is True
    code, out = call("psi", "--group", "cyclic:2", "--K", "1")
    assert code == 0 and out["holds"] and out["K1"] == 1 and out["H_bound"] == 1


def test_torus_check():
    code, out = call("torus-check", "--group", "gl:2:4", "--n", "1", "--l", "3")
    assert code == 0 and out["index"] == 20 and out["prime_to_l"]
    assert out["induced_map"]["surjective"] and out["consistent"]
    r = torus_check("gl:2:3", 1, 2)
    assert r["index"] == 12 and not r["prime_to_l"] and "surjective" in r["induced_map"]
    r = torus_check("sl:2:2", 1, 3)
    assert r["order"] == 6
    code, _ = call("torus-check", "--group", "sym:3")
    assert code == 2


def test_family_csv():
    code, out = call("family", "--template", "torus:1", "--q-range", "2..10", "--mod-filter",
                     "--l", "3", "--recipe", "d([r0,r0])", "--output", "csv")
    assert code == 0
    assert out.splitlines() == ["q,group_order,filler,exact", "4,3,1,true", "7,6,1,true"]
    code, out = call("family", "--template", "torus:1", "--q-range", "4,7", "--l", "3",
                     "--recipe", "d([r0,r0])")
    assert code == 0 and out["star_verdict"] == "bounded"


def test_exit_codes(tmp_path):
    assert call("frobnicate")[0] == 64
    assert call("group", "--group", "cyclic:x")[0] == 65
    assert call("family", "--q-range", "4", "--recipe", "[t0")[0] == 65
    code, out = call("isop", "--group", "sym:4", "--l", "3", "--K", "6")
    assert code == 3 and out["verdict"] == "refused"
    assert call("homology", "--group", "cyclic:2", "--l", "4")[0] == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("max_census = 0\n")
    assert call("group", "--group", "cyclic:2", "--config", str(bad))[0] == 2


def test_config_env(tmp_path, monkeypatch):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# tiny census\nmax_census = 1\n")
    monkeypatch.setenv("BARFILL_CONFIG", str(cfg))
    code, out = call("isop", "--group", "cyclic:3", "--l", "3", "--K", "2")
    assert code == 3


def test_deterministic_output():
    args = ["isop", "--group", "cyclic:5", "--l", "5", "--K", "2", "--mode", "sampled",
            "--samples", "50", "--seed", "7"]
    assert run(args) == run(args)


def test_selftest_single_suite():
    code, out = call("selftest", "--suite", "isop_micro")
    assert code == 0 and out["passed"]
    assert call("selftest", "--suite", "nope")[0] == 2


def test_console_entry(capsys):
    assert main(["group", "--group", "cyclic:4"]) == 0
    captured = capsys.readouterr()
    assert json.loads(captured.out)["order"] == 4
    assert "s" in captured.err          # timing only on stderr


def test_module_entry():
    p = subprocess.run([sys.executable, "-m", "barfill.cli", "bogus"], capture_output=True,
                       text=True)
    assert p.returncode == 64 and p.stdout == ""
