import pytest
from hypothesis import given
from hypothesis import strategies as st

from fbcount.errors import PreconditionViolated, UnclassifiedEvent
from fbcount.events import CROSSING, CUSP, DOUBLE_SUPPORTING, Event
from fbcount.identities import (CountReport, count_report, evaluate_identities, trace_Mp,
                                trace_Vp)

small = st.integers(0, 12)


def test_residuals_are_half_integers():
    r = CountReport(T1=3, T2=0, C1=1, I=1, A1=2, A2=1).fill_residuals()
    # 2(T1-T2) - (2C1 + I - A1 + A2) = 6 - (2 + 1 - 2 + 1)
    assert r.residuals["theorem1"] == (4,)
    assert r.residual_strings()["theorem1"] == ["2"]
    odd = CountReport(T1=1, I=1).fill_residuals()
    assert odd.residual_strings()["theorem1"] == ["1/2"]


def test_preconditions():
    with pytest.raises(PreconditionViolated):
        evaluate_identities(CountReport(I=2), "theorem3")
    with pytest.raises(PreconditionViolated):
        evaluate_identities(CountReport(), "theorem4")
    with pytest.raises(PreconditionViolated):
        evaluate_identities(CountReport(kbar=True), "theorem1")
    with pytest.raises(PreconditionViolated):
        evaluate_identities(CountReport(U=1), "corollary5")
    r = CountReport(I=2).fill_residuals()
    assert set(r.residuals) == {"theorem1"}


def test_cusp_touching_supporting_geodesics_drop_out_of_theorem3():
    r = CountReport(T1=2, T1_cusp=1, C1=0, U=1)
    # only the tangent-tangent geodesic enters: 0 - (2*1 + 1)
    assert evaluate_identities(r, "theorem3") == (-3,)


@given(small, small, small, small, small, small)
def test_corollary_matches_theorem1_and_3(T1, T2, C1, C2, N1, N2):
    r = CountReport(T1=T1, T2=T2, C1=C1, C2=C2, N1=N1, N2=N2).fill_residuals()
    if r.residuals["theorem1"] == (0,) and r.residuals["theorem3"] == (0,):
        assert r.residuals["corollary5"] == (0, 0)
    if r.residuals["corollary5"] == (0, 0):
        assert r.residuals["theorem1"] == (0,) and r.residuals["theorem3"] == (0,)


def test_dict_round_trip():
    r = CountReport(T1=1, C2=3, N1=2, U=1, T1_cusp=1).fill_residuals()
    assert CountReport.from_dict(r.to_dict()) == r


def test_count_report_needs_labels():
    with pytest.raises(UnclassifiedEvent):
        count_report([Event(CROSSING, (0.1, 0.2))])
    r = count_report([Event(CUSP, (0.0,)),
                      Event(DOUBLE_SUPPORTING, (0.0, 1.0), type_label=2, roles=("cusp", "tangent"))])
    assert (r.U, r.T2, r.T2_cusp) == (1, 1, 1)


def test_fixture_counts_give_zero_residuals(get_analysis):
    for name in ("limacon_looped", "wavy3", "deltoid"):
        assert get_analysis(name).report.all_zero(), name


def test_traces_vanish_on_convex_circle(get_curve):
    # every other point of a convex oval lies on one side of each tangent
    # geodesic, and each point lies on its own tangent only
    K = get_curve("skew_circle")
    for t in (0.3, 2.0, 4.5):
        assert trace_Mp(K, t).Mp == 0
        assert trace_Vp(K, t).Vp == 0
