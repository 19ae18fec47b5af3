from fbcount.curve import load_spec
from fbcount.genericity import CODES, check_genericity, dedupe
from fbcount.pipeline import analyze
from fbcount.report import build_report, exit_status

from conftest import fixture_path


def test_generic_fixtures_have_no_violations(get_analysis):
    for name in ("circle", "wavy5", "epicycloid3"):
        a = get_analysis(name)
        assert a.generic, (name, a.violations)
        assert check_genericity(a.curve, a.events) == []


def test_right_angle_crossing_is_flagged():
    a = analyze(load_spec(fixture_path("right_angle")))
    codes = {v["code"] for v in a.violations}
    assert "crossing_tangents_perpendicular" in codes
    assert codes <= set(CODES) | {"unclassified"}
    assert exit_status(build_report(a, ledgers=False)) == 3


def test_dedupe_merges_repeats():
    v = {"code": "x", "params": [0.1000000000001], "message": ""}
    w = {"code": "x", "params": [0.1], "message": "other"}
    assert dedupe([v, w]) == [v]
