"""End-to-end acceptance checks; each test records one PASS/FAIL line."""
import time
from dataclasses import replace

from scipy.spatial.transform import Rotation

from fbcount.curve import dual_curve
from fbcount.identities import VP_TABLE
from fbcount.oracle import match_events, oracle_report
from fbcount.pipeline import analyze
from fbcount.report import build_report

from conftest import (CUSPED, GENERIC, SMOOTH_NO_INFLECTION, WITH_INFLECTIONS, analysis, curve,
                      record)

FIG7 = {
    "fig7_left": dict(T1=1, T2=0, C1=0, C2=1, N1=4, N2=0),
    "fig7_right": dict(T1=1, T2=0, C1=1, C2=0, N1=0, N2=0),
}


def _check(number, problems, detail):
    record(number, not problems, detail if not problems else f"{detail}; problems: {problems}")
    assert not problems


def test_criterion_1_fig7_values():
    problems, times = [], []
    for name, want in FIG7.items():
        t0 = time.perf_counter()
        a = analyze(curve(name))
        dt = time.perf_counter() - t0
        times.append(f"{name} {dt:.2f}s")
        got = {k: getattr(a.report, k) for k in want}
        if got != want:
            problems.append(f"{name}: {got}")
        if dt >= 10:
            problems.append(f"{name} took {dt:.1f}s")
    _check(1, problems, "fig7 counts exact (" + ", ".join(times) + ")")


def test_criterion_2_theorem1():
    problems = []
    spans = {"convex": False, "figure-eight": False, "A>0": False}
    cusp_counts = set()
    for name in GENERIC:
        r = analysis(name).report
        if r.residuals.get("theorem1") != (0,):
            problems.append(f"{name}: {r.residual_strings().get('theorem1')}")
        spans["convex"] |= name in ("circle", "skew_circle")
        spans["figure-eight"] |= name.startswith("figure_eight")
        spans["A>0"] |= r.A1 + r.A2 > 0 and not r.U
        if r.U:
            cusp_counts.add(r.U)
    if not all(spans.values()) or not {1, 2, 3} <= cusp_counts or len(GENERIC) < 10:
        problems.append(f"coverage {spans}, U values {sorted(cusp_counts)}")
    _check(2, problems, f"theorem1 residual 0 on {len(GENERIC)} fixtures, U in {sorted(cusp_counts)}")


def test_criterion_3_theorems_3_4_and_corollary():
    problems = []
    no_infl = [n for n in GENERIC if analysis(n).report.I == 0]
    for name in no_infl:
        if analysis(name).report.residuals.get("theorem3") != (0,):
            problems.append(f"theorem3 {name}")
    kbar = [n for n in WITH_INFLECTIONS if analysis(n).report.I in (2, 4)]
    for name in kbar:
        if analysis(name, kbar=True).report.residuals.get("theorem4") != (0,):
            problems.append(f"theorem4 {name}")
    if len(kbar) < 3:
        problems.append(f"only {len(kbar)} fixtures with I in (2, 4)")
    cor = [n for n in GENERIC if "corollary5" in analysis(n).report.residuals]
    for name in cor:
        if analysis(name).report.residuals["corollary5"] != (0, 0):
            problems.append(f"corollary {name}")
    _check(3, problems, f"theorem3 on {len(no_infl)}, theorem4 on {len(kbar)} ({', '.join(kbar)}), "
                        f"corollary on {len(cor)}")


DUALITY = ["skew_circle", "limacon_looped", "limacon_deep_loop", "fig7_left", "fig7_right",
           "limacon_convex", "wavy3", "figure_eight_a", "planar_two_inflections"]


def test_criterion_4_duality():
    problems = []
    for name in DUALITY:
        r = analysis(name).report
        d = analyze(dual_curve(curve(name))).report
        # supporting geodesics of the dual at its cusps are not images of crossings
        pairs = [("C1", r.C1, d.T1 - d.T1_cusp), ("C2", r.C2, d.T2 - d.T2_cusp),
                 ("I", r.I, d.U), ("A1", r.A1, d.N1), ("A2", r.A2, d.N2)]
        bad = [f"{k} {x}!={y}" for k, x, y in pairs if x != y]
        if bad:
            problems.append(f"{name}: {bad}")
    _check(4, problems, f"C_i=T_i', I=U', A_i=N_i' on {len(DUALITY)} smooth fixtures")


def test_criterion_5_oracle():
    problems, unmatched, worst = [], 0, 0.0
    for name in GENERIC:
        a = analysis(name)
        t0 = time.perf_counter()
        rep, events = oracle_report(a.curve)     # default resolution, checked against doubling
        worst = max(worst, time.perf_counter() - t0)
        if not rep.same_counts(a.report):
            problems.append(f"{name}: oracle {rep.counts()} vs {a.report.counts()}")
        matched, only_p, only_o = match_events(a.events, events, a.curve.L, 1e-3 * a.curve.L)
        unmatched += len(only_p) + len(only_o)
        if only_p or only_o or not all(same for _, _, same in matched):
            problems.append(f"{name}: {len(only_p)}+{len(only_o)} unmatched")
    _check(5, problems, f"oracle at 1e5 (doubling-stable) equals pipeline on {len(GENERIC)} fixtures, "
                        f"{unmatched} unmatched, slowest {worst:.1f}s")


def _event_totals(block, events):
    """Sum of jumps per event index, for events whose parameters all sit in unshared entries."""
    tot, shared = {}, set()
    for entry in block["jumps"]:
        idx = [e["index"] for e in entry["events"]]
        if len(idx) != 1 or entry["jump"] is None:
            shared.update(idx)
            continue
        tot[idx[0]] = tot.get(idx[0], 0) + entry["jump"]
    return {i: v for i, v in tot.items() if i not in shared}


def _vp_expected(e):
    kind, lab = e.kind, e.type_label
    if kind == "Crossing":
        return VP_TABLE[("C", lab)]
    if kind == "DoubleSupporting":
        return 0 if "cusp" in (e.roles or ()) else VP_TABLE[("T", lab)]
    if kind == "Cusp":
        return VP_TABLE[("U", None)]
    if kind == "NormalTangentPair":
        return VP_TABLE[("N", lab)]
    return 0


def test_criterion_6_trace_ledgers():
    problems, antipodal_jumps, vp_fixtures = [], 0, 0
    for name in GENERIC:
        a = analysis(name)
        rep = build_report(a)
        mp = rep["trace_ledger"]["Mp"]
        if "error" in mp or mp["net_change"] != 0 or mp["unattributed"] or mp["mismatches"]:
            problems.append(f"Mp {name}")
            continue
        for entry in mp["jumps"]:
            if len(entry["events"]) == 1 and entry["events"][0]["kind"] == "AntipodalPair" \
                    and entry["events"][0]["role"] == 0:
                want = 2 if entry["events"][0]["type"] == 1 else -2
                antipodal_jumps += 1
                if entry["jump"] != want:
                    problems.append(f"antipodal jump {name}: {entry['jump']}")
        if a.report.I:
            continue
        vp = rep["trace_ledger"]["Vp"]
        vp_fixtures += 1
        if "error" in vp or vp["unattributed"] or vp["mismatches"] or vp["net_change"] != 0:
            problems.append(f"Vp {name}")
            continue
        for i, total in _event_totals(vp, a.events).items():
            if total != _vp_expected(a.events[i]):
                problems.append(f"Vp total {name} event {i}: {total}")
    _check(6, problems, f"Mp net 0 on {len(GENERIC)} fixtures, {antipodal_jumps} antipodal jumps of +-2, "
                        f"Vp table on {vp_fixtures} inflection-free fixtures")


ROBUST = ["fig7_left", "limacon_looped", "wavy3", "wavy5", "figure_eight_a", "cardioid_wide",
          "two_cusp", "deltoid_wide"]


def test_criterion_7_robustness():
    problems = []
    rots = Rotation.random(20, random_state=20261016).as_matrix()
    for name in ROBUST:
        base = analysis(name).report
        for k, R in enumerate(rots):
            r = analyze(curve(name).rotated(R)).report
            if not r.same_counts(base) or r.residuals != base.residuals:
                problems.append(f"{name} rotation {k}")
    for name in GENERIC:
        a = analysis(name)
        r = analyze(curve(name).reversed()).report
        if not r.same_counts(a.report) or r.residuals != a.report.residuals:
            problems.append(f"{name} reversed")
        K = curve(name)
        half = analyze(K.with_config(replace(K.config, eps_frac=K.config.eps_frac / 2)))
        matched, only_p, only_o = match_events(a.events, half.events, K.L, 1e-6 * K.L)
        if only_p or only_o or not all(same for _, _, same in matched):
            problems.append(f"{name} eps/2")
    _check(7, problems, f"20 rotations on {len(ROBUST)} fixtures, reversal and eps halving on "
                        f"{len(GENERIC)}")


def test_fixture_roles_are_consistent():
    for name in SMOOTH_NO_INFLECTION:
        assert analysis(name).report.I == 0 and analysis(name).report.U == 0
    for name in CUSPED:
        assert analysis(name).report.U > 0
