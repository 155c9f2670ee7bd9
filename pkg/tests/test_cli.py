import json
from pathlib import Path

import pytest

from lmeas import cli, harness as Hn
from lmeas.lattice import Verdict


def test_list(capsys):
    assert cli.main(["list"]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == len(Hn.BUILTINS)


def test_run_builtins_json(tmp_path, capsys):
    assert cli.main(["run", "--builtins", "--out", str(tmp_path), "--jobs", "2"]) == 0
    index = json.loads((tmp_path / "index.json").read_text())
    assert index["schema_version"] == Hn.SCHEMA_VERSION
    assert {e["scenario"] for e in index["scenarios"]} == set(Hn.BUILTINS)
    assert all(e["conclusion"] in ("holds", "unknown") for e in index["scenarios"])
    report = json.loads((tmp_path / "schur-triangle.json").read_text())
    assert report["derived_regulator"].startswith("(scaled")


def test_run_scenario_files(tmp_path):
    f = tmp_path / "s.scn"
    f.write_text(Hn.dump_scenario(Hn.builtin("finale-zero")))
    assert cli.main(["run", str(f), "--out", str(tmp_path / "o"), "--format", "csv"]) == 0
    rows = (tmp_path / "o" / "finale-zero.csv").read_text().splitlines()
    assert rows[0].startswith("scenario,theorem") and rows[1].startswith("finale-zero,finale,12,0,holds,false")


def test_csv_and_md_project_the_json_fields(tmp_path):
    out = {}
    for fmt in ("json", "csv", "md"):
        assert cli.main(["run", "builtin:nuovoschur-zero", "--out", str(tmp_path / fmt), "--format", fmt]) == 0
        out[fmt] = (tmp_path / fmt / f"nuovoschur-zero.{fmt}").read_text()
    d = json.loads(out["json"])
    row = cli._row(d)
    assert cli.render_csv([row]) == out["csv"]
    assert d["derived_regulator"] in out["md"]


def test_malformed_file_exits_1_with_location(tmp_path, capsys):
    f = tmp_path / "bad.scn"
    f.write_text("(scenario bad\n  (theorem main)\n  (filter (singletons)")
    assert cli.main(["run", str(f), "--out", str(tmp_path / "o")]) == 1
    assert f"{f}:" in capsys.readouterr().err


def test_unknown_theorem_rejected(tmp_path, capsys):
    f = tmp_path / "t.scn"
    f.write_text("(scenario t (theorem fermat) (filter (singletons)) (family (zero 1)) (regulators) (samples))")
    assert cli.main(["run", str(f), "--out", str(tmp_path)]) == 1
    assert "fermat" in capsys.readouterr().err


def test_injected_violation_exits_2(tmp_path, monkeypatch):
    def broken(s):
        return Hn.TheoremReport(s.theorem, s.name, [("pointwise convergence", Verdict.holds())],
                                Verdict.fails({"injected": True}), None)
    monkeypatch.setattr(Hn, "run_scenario", broken)
    assert cli.main(["run", "builtin:finale-zero", "--out", str(tmp_path)]) == 2


def test_depth_override_and_env(tmp_path, monkeypatch):
    monkeypatch.setenv("LMEAS_DEPTH", "6")
    assert cli.main(["run", "builtin:finale-zero", "--out", str(tmp_path)]) == 0
    assert json.loads((tmp_path / "finale-zero.json").read_text())["depth"] == 6
    assert cli.main(["run", "builtin:finale-zero", "--out", str(tmp_path), "--depth", "3"]) == 1
    assert cli.main(["run", "builtin:finale-zero", "--out", str(tmp_path), "--depth", "8"]) == 0
    assert json.loads((tmp_path / "finale-zero.json").read_text())["depth"] == 8


def test_usage_errors_exit_1():
    with pytest.raises(SystemExit) as e:
        cli.main(["run", "--format", "xml"])
    assert e.value.code == 1


def test_check_property(tmp_path, capsys):
    ch = tmp_path / "c.scn"
    ch.write_text("(charge (space countable) (dim 1) (atoms) (geometric) (diffuse) (at-infinity (vec 1) (singletons)))")
    assert cli.main(["check", "--property", "purely-finitely-additive", "--depth", "50", str(ch)]) == 0
    assert json.loads(capsys.readouterr().out)["outcome"] == "holds"
    plain = tmp_path / "p.scn"
    plain.write_text("(charge (space countable) (dim 1) (atoms (3 (vec 1))) (geometric) (diffuse))")
    assert cli.main(["check", "--property", "purely-finitely-additive", "--depth", "50", str(plain)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["outcome"] == "fails" and out["witness"]["singleton"] == 3
    assert cli.main(["check", "--property", "no-such-thing", str(plain)]) == 1
    sc = tmp_path / "s.scn"
    sc.write_text(Hn.dump_scenario(Hn.builtin("main-diagonal-point-masses")))
    assert cli.main(["check", "--property", "uniform-s-bounded", "--depth", "10", str(sc)]) == 0
    assert json.loads(capsys.readouterr().out)["outcome"] == "fails"
