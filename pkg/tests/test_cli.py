import csv
import io
import json
import subprocess
import sys

import pytest

from fbcount import cli
from fbcount.report import exit_status

from conftest import fixture_path


def run(*argv):
    return cli.main([str(a) for a in argv])


def test_analyze_writes_report_and_svg(tmp_path):
    out, svg = tmp_path / "r.json", tmp_path / "r.svg"
    assert run("analyze", fixture_path("limacon_looped"), "--json", out, "--svg", svg) == 0
    rep = json.loads(out.read_text())
    assert rep["generic"] and rep["counts"]["C1"] + rep["counts"]["C2"] == 1
    assert all(v == ["0"] or v == ["0", "0"] for v in rep["residuals"].values())
    assert rep["trace_ledger"]["Mp"]["net_change"] == 0
    assert svg.read_text().startswith("<svg")


def test_render_is_byte_identical(tmp_path):
    out, a, b = tmp_path / "r.json", tmp_path / "a.svg", tmp_path / "b.svg"
    run("analyze", fixture_path("deltoid"), "--json", out, "--svg", a, "--no-ledger")
    assert run("render", out, "--svg", b) == 0
    assert a.read_bytes() == b.read_bytes()


def test_non_generic_exits_3(tmp_path):
    assert run("analyze", fixture_path("right_angle"), "--json", tmp_path / "r.json") == 3
    assert run("check", fixture_path("right_angle"), "--json", tmp_path / "c.json") == 3
    assert json.loads((tmp_path / "c.json").read_text())["generic"] is False


def test_nonzero_residual_maps_to_2():
    rep = {"generic": True, "violations": [], "residuals": {"theorem1": ["1/2"]}}
    assert exit_status(rep) == 2
    rep["residuals"]["theorem1"] = ["0"]
    assert exit_status(rep) == 0


@pytest.mark.parametrize("spec, field", [
    ({"builtin": {"name": "limacon", "params": {"b": 0.5, "bogus": 1}}}, "builtin.params.bogus"),
    ({"kind": "planar"}, "builtin"),
    ({"builtin": {"name": "limacon"}, "config": {"no_such_key": 1}}, "config"),
])
def test_malformed_spec_names_field(tmp_path, capsys, spec, field):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(spec))
    assert run("check", p) == 1
    assert f"field '{field}'" in capsys.readouterr().err


def test_unreadable_file_and_bad_threads(tmp_path, capsys):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    assert run("check", p) == 1
    assert run("check", fixture_path("circle"), "--threads", "0") == 1
    assert "--threads" in capsys.readouterr().err


def test_dual_spec_round_trip(tmp_path):
    d = tmp_path / "dual.json"
    assert run("dual", fixture_path("limacon_convex"), "-o", d) == 0
    out = tmp_path / "r.json"
    assert run("analyze", d, "--json", out, "--no-ledger") == 0
    dual = json.loads(out.read_text())["counts"]
    base = json.loads(subprocess.run(
        [sys.executable, "-m", "fbcount", "analyze", str(fixture_path("limacon_convex")), "--no-ledger"],
        capture_output=True, text=True, check=True).stdout)["counts"]
    assert dual["U"] == base["I"]
    assert (dual["N1"], dual["N2"]) == (base["A1"], base["A2"])


def test_trace_csv(tmp_path):
    out = tmp_path / "t.csv"
    assert run("trace", fixture_path("limacon_looped"), "--samples", 32, "-o", out) == 0
    rows = list(csv.reader(io.StringIO(out.read_text())))
    assert rows[0] == ["t", "Mp_plus", "Mp_minus", "Mp"]
    assert len(rows) == 33
    assert {r[3] for r in rows[1:] if r[3]} <= {"-2", "-1", "0", "1", "2"}


def test_threads_env_and_flag_give_same_output(tmp_path, monkeypatch):
    monkeypatch.setenv("FBCOUNT_THREADS", "1")
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run("analyze", fixture_path("wavy3"), "--json", a)
    monkeypatch.delenv("FBCOUNT_THREADS")
    run("analyze", fixture_path("wavy3"), "--json", b, "--threads", 4)
    assert a.read_text() == b.read_text()


def test_oracle_subcommand(tmp_path):
    out = tmp_path / "o.json"
    assert run("oracle", fixture_path("limacon_looped"), "--resolution", 10000, "--json", out) == 0
    assert json.loads(out.read_text())["unclassified"] == []
    assert run("oracle", fixture_path("limacon_looped"), "--resolution", 100, "--json", out) == 3


def test_help_lists_config_defaults(capsys):
    with pytest.raises(SystemExit):
        cli.main(["--help"])
    text = capsys.readouterr().out
    assert "oracle_resolution" in text and "exit status" in text
