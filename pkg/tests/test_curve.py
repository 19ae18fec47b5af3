import json
import math

import numpy as np
import pytest

from fbcount.curve import (BUILTINS, builtin, dual_curve, from_samples, inflection_params,
                           lift_planar, load_spec, spec_of)
from fbcount.errors import DoubleZero, GapTooLarge, SpecError, TooFewSamples


def test_latitude_circle_is_two_sided_and_closed():
    K = builtin("latitude_circle")
    assert K.sigma == 1
    t = np.linspace(0, K.L, 9)
    P = K.point(t)
    assert np.allclose(P[0], P[-1])


def test_wavy_odd_harmonic_is_one_sided():
    K = builtin("wavy_great_circle", amplitude=0.2, harmonics=3)
    assert K.sigma == -1
    assert math.isclose(K.L, math.pi)


def test_great_circle_has_no_isolated_inflections():
    with pytest.raises(DoubleZero):
        inflection_params(builtin("wavy_great_circle", amplitude=0.0, harmonics=3))


def test_dual_turns_inflections_into_cusps():
    K = builtin("limacon", b=1.5, skew=0.2)
    infl = inflection_params(K)
    assert len(infl) == 2
    D = dual_curve(K)
    assert np.allclose(D.cusps, sorted(infl))
    speed = D.local(infl).speed
    assert np.all(speed < 1e-6)


def test_from_samples_interpolates():
    t = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    P = np.column_stack([0.5 * np.cos(t), 0.5 * np.sin(t), np.ones_like(t)])
    K = from_samples(P)
    Q = K.point(2 * np.pi * np.arange(64) / 64)
    P /= np.linalg.norm(P, axis=1, keepdims=True)
    assert np.allclose(np.abs(np.einsum("ij,ij->i", P, Q)), 1.0, atol=1e-12)


def test_sample_validation():
    with pytest.raises(TooFewSamples):
        from_samples(np.eye(3))
    t = np.linspace(0, 1.5 * np.pi, 20)     # leaves a gap of pi/2
    with pytest.raises(GapTooLarge):
        from_samples(np.column_stack([np.cos(t), np.sin(t), 0 * t]))


def test_lift_planar_fits_cap():
    t = np.linspace(0, 2 * np.pi, 100, endpoint=False)
    K = lift_planar(np.column_stack([10 * np.cos(t), 3 * np.sin(t)]))
    P = K.point(np.linspace(0, K.L, 50))
    assert np.all(np.abs(P[:, 2]) > math.cos(math.pi / 4))


def test_skew_preserves_cusps():
    K = builtin("cusped_hypocycloid", cusps=3, skew=0.2)
    speeds = K.local(np.array([0.0, 2 * np.pi / 3, 4 * np.pi / 3])).speed
    assert np.all(speeds < 1e-9)


def test_spec_round_trip(tmp_path):
    K = builtin("limacon", b=0.5, skew=0.2)
    path = tmp_path / "s.json"
    path.write_text(json.dumps(spec_of(K)))
    K2 = load_spec(path)
    t = np.linspace(0, K.L, 17)
    assert np.allclose(K.point(t), K2.point(t))


@pytest.mark.parametrize("spec, field", [
    ({"kind": "hyperbolic", "builtin": {"name": "limacon"}}, "kind"),
    ({"builtin": {"name": "nope"}}, "builtin.name"),
    ({"builtin": {"name": "limacon", "params": {"zz": 1}}}, "builtin.params.zz"),
    ({"kind": "planar", "samples": [[1, 2, 3]]}, "samples"),
    ({"cusps": "x", "builtin": {"name": "limacon"}}, "cusps"),
    ({}, "builtin"),
])
def test_spec_errors_name_the_field(spec, field):
    with pytest.raises(SpecError) as exc:
        load_spec(spec)
    assert exc.value.field == field


def test_every_builtin_constructs():
    for name in BUILTINS:
        if name in ("dual", "planar_fourier"):    # these need parameters
            continue
        K = builtin(name)
        assert K.L > 0 and K.sigma in (1, -1)
