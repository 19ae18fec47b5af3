import math

import numpy as np

from fbcount.curve import inflection_params
from fbcount.kbar import InflectionGeodesic, build_kbar, kbar_events


def test_geodesic_locate_inverts_point():
    g = InflectionGeodesic(0.0, np.array([0, 0, 1.0]), np.array([1.0, 0, 0]), np.array([0, 1.0, 0]))
    for theta in (0.2, 1.0, 2.9):
        x = g.point(theta)
        assert math.isclose(g.locate(x)[0], theta)
        th, s = g.locate(-x)
        assert math.isclose(th, theta) and s == -1.0


def test_one_geodesic_per_inflection(get_curve):
    K = get_curve("limacon_dimpled")
    A = build_kbar(K)
    assert len(A.geodesics) == len(inflection_params(K)) == 2
    for g in A.geodesics:
        # the geodesic is tangent to K at its anchor and nu is a pole of it
        assert abs(g.p @ g.pole) < 1e-12
        assert abs(abs(g.nu @ g.pole) - 1) < 1e-12


def test_kbar_events_are_labeled(get_curve):
    A = build_kbar(get_curve("figure_eight_a"))
    violations: list = []
    extra = kbar_events(A, violations)
    assert not violations
    assert extra and all(e.type_label in (1, 2) for e in extra)


def test_theorem4_on_kbar(get_analysis):
    for name in ("limacon_dimpled", "wavy3"):
        r = get_analysis(name, kbar=True).report
        assert r.kbar and r.residuals["theorem4"] == (0,), name
