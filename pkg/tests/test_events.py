import math

import numpy as np
import pytest

from fbcount import classify as cl
from fbcount import events as ev
from fbcount.curve import builtin
from fbcount.errors import GenericityError
from fbcount.roots import circ_dist, sign_change_roots


def test_sign_change_roots_with_closure():
    r = sign_change_roots(np.sin, 2 * math.pi, 64)
    assert np.allclose(sorted(r), [0, math.pi], atol=1e-10) or np.allclose(sorted(r), [math.pi, 2 * math.pi])
    # cos(t/2) over [0, 2pi) flips sign across the seam
    r = sign_change_roots(lambda t: np.cos(np.asarray(t) / 2), 2 * math.pi, 64, closure=-1.0)
    assert len(r) == 1 and math.isclose(r[0], math.pi, abs_tol=1e-10)


def test_circ_dist():
    assert math.isclose(circ_dist(0.1, 6.2, 2 * math.pi), 2 * math.pi - 6.1)


def test_crossings_of_looped_limacon():
    K = builtin("limacon", b=0.5, skew=0.2)
    C = ev.find_crossings(K)
    assert len(C) == 1
    s, t = C[0].params
    assert np.allclose(np.abs(K.point([s])[0] @ K.point([t])[0]), 1.0)


def test_no_events_on_convex_circle():
    K = builtin("latitude_circle", skew=0.2)
    assert ev.find_crossings(K) == []
    assert ev.find_double_supporting(K) == []


def test_deltoid_cusps():
    K = builtin("cusped_hypocycloid", cusps=3, skew=0.2)
    cusps = ev.find_cusps(K)
    got = sorted(e.params[0] % K.L for e in cusps)
    want = [0.0, 2 * math.pi / 3, 4 * math.pi / 3]
    assert all(min(circ_dist(g, w, K.L) for w in want) < 1e-6 for g in got)
    assert len(got) == 3


def test_double_supporting_support_points_share_tangent():
    K = builtin("limacon", b=0.5, skew=0.2)
    (e,) = [x for x in ev.find_double_supporting(K) if x.subkind == "tangent-tangent"]
    loc = K.local(list(e.params))
    assert abs(abs(loc.N[0] @ loc.N[1]) - 1) < 1e-9


def test_event_dict_round_trip():
    e = ev.Event(ev.CROSSING, (0.5, 1.5), type_label=2, location=((0.0, 0.0, 1.0),), flags=("x",))
    assert ev.Event.from_dict(e.to_dict()) == e


def _probes(x, T, N, eps, bend):
    P = np.array([x - eps * T + bend * eps ** 2 * N, x + eps * T + bend * eps ** 2 * N])
    return P / np.linalg.norm(P, axis=1, keepdims=True)


def test_sector_label_flips_with_one_branch():
    x = np.array([0.0, 0.0, 1.0])
    a = math.radians(60)
    T1, T2 = np.array([1.0, 0, 0]), np.array([math.cos(a), math.sin(a), 0])
    N1, N2 = np.cross(x, T1), np.cross(x, T2)
    eps = 1e-3
    p2 = _probes(x, T2, N2, eps, 1.0)
    up = cl.sector_label(x, T1, T2, _probes(x, T1, N1, eps, 1.0), p2)
    down = cl.sector_label(x, T1, T2, _probes(x, T1, N1, eps, -1.0), p2)
    assert {up, down} == {1, 2}
    # a probe exactly on the tangent line cannot be placed
    assert cl.sector_label(x, T1, T2, _probes(x, T1, N1, eps, 0.0), p2) is None


def test_perpendicular_crossing_is_rejected():
    K = builtin("planar_fourier", x=[[1, 0, 1]], y=[[2, 0, 0.5]])
    C = ev.find_crossings(K)
    assert C
    with pytest.raises(GenericityError) as exc:
        for e in C:
            cl.classify(K, e)
    assert exc.value.code == "crossing_tangents_perpendicular"


def test_fig7_crossing_types():
    left = builtin("fig7_left")
    right = builtin("fig7_right")
    (cl_,) = ev.find_crossings(left)
    (cr,) = ev.find_crossings(right)
    assert cl.classify(left, cl_).type_label == 2
    assert cl.classify(right, cr).type_label == 1
