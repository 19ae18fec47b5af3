import pytest

from fbcount.errors import ResolutionTooLow
from fbcount.events import CROSSING, Event
from fbcount.oracle import MIN_RESOLUTION, match_events, oracle_events, oracle_report


def test_rejects_coarse_resolution(get_curve):
    with pytest.raises(ResolutionTooLow):
        oracle_events(get_curve("circle"), MIN_RESOLUTION // 2)


def test_low_resolution_agrees_with_pipeline(get_curve, get_analysis):
    for name in ("limacon_looped", "deltoid"):
        rep, events = oracle_report(get_curve(name), MIN_RESOLUTION)
        a = get_analysis(name)
        assert rep.same_counts(a.report), name
        matched, only_p, only_o = match_events(a.events, events, a.curve.L, 1e-3 * a.curve.L)
        assert not only_p and not only_o
        assert all(same for _, _, same in matched)


def test_match_accepts_swapped_pair_params():
    a = Event(CROSSING, (1.0, 4.0), type_label=1)
    b = Event(CROSSING, (4.0000001, 0.9999999), type_label=1)
    c = Event(CROSSING, (2.0, 3.0), type_label=2)
    matched, only_p, only_o = match_events([a], [b, c], 6.0, 1e-4)
    assert len(matched) == 1 and matched[0][2]
    assert only_p == [] and only_o == [c]
