import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fbcount.errors import DegeneratePair, PointNotOnGeodesic
from fbcount.projective import (OrientedGeodesic, ProjectivePoint, canonical, canonical_rows,
                                dualize_geodesic, dualize_point, geodesic_through, point_along,
                                proj_distance, region_sign)

coord = st.floats(-1, 1, allow_nan=False)
vec = st.tuples(coord, coord, coord).filter(lambda v: np.linalg.norm(v) > 1e-3)


@given(vec)
def test_canonical_is_sign_invariant(v):
    v = np.array(v)
    assert np.allclose(canonical(v), canonical(-v))
    assert np.isclose(np.linalg.norm(canonical(v)), 1.0)


@given(st.lists(vec, min_size=1, max_size=8))
def test_canonical_rows_matches_scalar(vs):
    V = np.array(vs)
    rows = canonical_rows(V)
    for v, r in zip(V, rows):
        assert np.allclose(canonical(v), r)


@given(vec, vec)
def test_distance_symmetric_and_bounded(a, b):
    p, q = ProjectivePoint(a), ProjectivePoint(b)
    d = proj_distance(p, q)
    assert 0 <= d <= math.pi / 2 + 1e-12
    assert math.isclose(d, proj_distance(q, p), abs_tol=1e-12)


def test_antipodes_are_equal_points():
    assert ProjectivePoint([1, 2, 3]) == ProjectivePoint([-1, -2, -3])
    assert proj_distance(ProjectivePoint([0, 0, 1]), ProjectivePoint([0, 0, -1])) == 0


def test_dualize_round_trip():
    p = ProjectivePoint([0.3, -0.2, 0.9])
    assert proj_distance(dualize_geodesic(dualize_point(p)), p) < 1e-15


def test_geodesic_through_contains_both_points():
    p, q = ProjectivePoint([1, 0, 0.2]), ProjectivePoint([0, 1, 0.3])
    g = geodesic_through(p, q)
    assert g.contains(p) and g.contains(q)
    with pytest.raises(DegeneratePair):
        geodesic_through(p, p)


@settings(max_examples=50)
@given(st.floats(0, math.pi))
def test_point_along_walks_at_unit_speed(s):
    g = OrientedGeodesic([0, 0, 1])
    x = ProjectivePoint([1, 0, 0])
    y = point_along(g, x, s)
    assert math.isclose(proj_distance(x, y), min(s, math.pi - s), abs_tol=1e-9)
    with pytest.raises(PointNotOnGeodesic):
        point_along(g, ProjectivePoint([0, 0, 1]), s)


def test_region_sign_is_projective():
    a, b = np.array([1.0, 0, 0]), np.array([0, 1.0, 0])
    x = np.array([0.4, 0.5, 0.7])
    assert region_sign(x, a, b) == region_sign(-x, a, b) == 1.0
