"""Mechanical genericity checks.

Each check returns violation dicts ``{"code", "message", "params"}``.  The
checks only falsify genericity at tolerance scale; an empty list does not
prove anything.
"""
from __future__ import annotations

import numpy as np
from scipy.optimize import minimize_scalar

from . import ambient as amb
from .curve import CurveModel
from .events import (ANTIPODAL, CROSSING, CUSP, DOUBLE_SUPPORTING, INFLECTION, NORMAL_TANGENT,
                     cusp_direction)
from .roots import circ_dist, periodic_grid

CODES = {
    "crossing_tangents_parallel": "tangent geodesics at a crossing are parallel",
    "crossing_tangents_perpendicular": "tangent geodesics at a crossing are perpendicular",
    "crossing_at_inflection": "a crossing sits at an inflection point",
    "crossing_at_cusp": "a crossing sits at a cusp",
    "inflection_tangent_not_transverse": "the tangent geodesic at an inflection touches K elsewhere",
    "cusp_tangent_not_transverse": "the tangent geodesic at a cusp touches K elsewhere",
    "three_point_geodesic": "a geodesic passes through more than two tangent points or cusps",
    "normal_tangent_twice": "a normal geodesic is tangent to K at more than one point",
    "near_half_pi": "support points of a double supporting geodesic are pi/2 apart",
    "antipodal_tangent_equals_tau_p": "at an antipodal pair the tangent at q equals the tangent at p",
    "antipodal_tangent_equals_Y_p": "at an antipodal pair the tangent at q is the geodesic dual to c_p",
    "normal_tangent_center_hit": "at a normal-tangent pair q is the center of curvature of p",
    "event_near_singular_point": "an event lies too close to a cusp or inflection to classify",
    "mixed_side_at_tangency": "a tangent point of a supporting geodesic is not a simple tangency",
    "cusp_branches_disagree": "the branches of a cusp lie on both sides of a supporting geodesic",
    "unclassified": "classification failed for an event",
    "normal_equals_cusp_tangent": "a normal geodesic of K is the tangent geodesic at a cusp",
    "antipodal_point_at_cusp": "the antipodal point of some p is a cusp",
    "antipodal_pair_at_inflection": "an antipodal pair has an inflection point as an end",
    "normal_tangent_at_inflection": "a normal-tangent pair has an inflection point as an end",
}


def _v(code, params=(), message=None, kind=None):
    d = {"code": code, "message": message or CODES.get(code, code),
         "params": [float(x) for x in params]}
    if kind:
        d["kind"] = kind
    return d


def check_crossings(K: CurveModel, events):
    out = []
    infl = [e.params[0] for e in events if e.kind == INFLECTION]
    tol = K.delta_cusp
    for e in events:
        if e.kind != CROSSING:
            continue
        if "tangential_contact" in e.flags:
            out.append(_v("crossing_tangents_parallel", e.params, kind=e.kind))
        if "near_cusp" in e.flags:
            out.append(_v("crossing_at_cusp", e.params, kind=e.kind))
        if any(circ_dist(s, u, K.L) < tol for s in e.params for u in infl):
            out.append(_v("crossing_at_inflection", e.params, kind=e.kind))
    return out


def _touches(K: CurveModel, pole, exclude, n):
    """Parameters where K touches the geodesic with ``pole`` without crossing it."""
    t = periodic_grid(K.L, n)
    g = K.point(t) @ pole
    a = np.abs(g)
    lm = np.flatnonzero((a <= np.roll(a, 1)) & (a <= np.roll(a, -1)))
    h = K.L / n
    hits = []
    for i in lm:
        if circ_dist(t[i], exclude, K.L) < 4 * h:
            continue
        # no sign change across the minimum but the value is tiny
        if g[i - 1] * g[(i + 1) % n] > 0 and a[i] < 10 * h * h:
            hits.append(float(t[i]))
    return hits


def check_singular_tangents(K: CurveModel, events):
    out = []
    n = 16 * K.config.grid
    for e in events:
        u = e.params[0]
        if e.kind == INFLECTION:
            pole = K.local([u]).N[0]
            code = "inflection_tangent_not_transverse"
        elif e.kind == CUSP:
            P, v = cusp_direction(K, u)
            pole = np.cross(P, v)
            code = "cusp_tangent_not_transverse"
        else:
            continue
        for t in _touches(K, pole / np.linalg.norm(pole), u, n):
            out.append(_v(code, (u, t), kind=e.kind))
    return out


def check_three_point(K: CurveModel, events):
    """Two supporting events sharing a geodesic mean three or more support points."""
    ds = [e for e in events if e.kind == DOUBLE_SUPPORTING and e.pole is not None]
    out = []
    for i in range(len(ds)):
        for j in range(i + 1, len(ds)):
            a, b = np.asarray(ds[i].pole), np.asarray(ds[j].pole)
            a, b = a / np.linalg.norm(a), b / np.linalg.norm(b)
            if np.linalg.norm(np.cross(a, b)) < K.config.tol_ang:
                out.append(_v("three_point_geodesic", ds[i].params + ds[j].params, kind=DOUBLE_SUPPORTING))
    return out


def check_normal_tangent(K: CurveModel, events):
    nt = [e for e in events if e.kind == NORMAL_TANGENT and not e.subkind]
    out = []
    for i in range(len(nt)):
        for j in range(i + 1, len(nt)):
            if circ_dist(nt[i].params[0], nt[j].params[0], K.L) < K.config.dedup_frac * K.L * 10:
                out.append(_v("normal_tangent_twice", nt[i].params + nt[j].params, kind=NORMAL_TANGENT))
    return out


def check_flags(events):
    out = []
    for e in events:
        if e.kind in (DOUBLE_SUPPORTING,) and "near_half_pi" in e.flags:
            out.append(_v("near_half_pi", e.params, kind=e.kind))
        if e.kind in (CROSSING, DOUBLE_SUPPORTING, ANTIPODAL, NORMAL_TANGENT) and e.type_label is None:
            codes = [f for f in e.flags if f in CODES] or ["unclassified"]
            for c in codes:
                out.append(_v(c, e.params, kind=e.kind))
    return out


def check_diagnostics(diagnostics):
    out = []
    for d in diagnostics or ():
        if d.get("code") == "EventNearSingularPoint":
            out.append(_v("event_near_singular_point", d.get("params", ()), kind=d.get("kind")))
    return out


def _near_zero(K: CurveModel, fn, exclude, n):
    """Local minima of ``fn`` on a fine grid, refined; returns (t, value) below tol_ang."""
    t = periodic_grid(K.L, n)
    with np.errstate(all="ignore"):
        g = fn(t)
    g = np.where(np.isfinite(g), g, np.inf)
    h = K.L / n
    lm = np.flatnonzero((g <= np.roll(g, 1)) & (g <= np.roll(g, -1)) & (g < 100 * K.config.tol_ang))
    hits = []
    for i in lm:
        if any(circ_dist(t[i], x, K.L) < 2 * K.delta_cusp for x in exclude):
            continue
        r = minimize_scalar(lambda x: float(fn(np.array([x]))[0]), bounds=(t[i] - h, t[i] + h),
                            method="bounded", options={"xatol": 1e-13})
        if r.fun < K.config.tol_ang:
            hits.append((float(r.x) % K.L, float(r.fun)))
    return hits


def _gap(rows, x):
    rows = rows / np.linalg.norm(rows, axis=-1, keepdims=True)
    return np.linalg.norm(np.cross(rows, x / np.linalg.norm(x)), axis=-1)


def check_singular_pairs(K: CurveModel, events):
    """Antipodal and normal-tangent coincidences that land on a cusp or inflection."""
    n = 16 * K.config.grid
    Tl = amb.indicatrix_of(K.ambient)
    D = amb.dual_of(K.ambient)
    sing = [e.params[0] for e in events if e.kind in (CUSP, INFLECTION)]
    out = []
    for e in events:
        u = e.params[0]
        if e.kind == CUSP:
            P, v = cusp_direction(K, u)
            w = np.cross(P, v)
            tests = [("normal_equals_cusp_tangent", Tl, w), ("antipodal_point_at_cusp", Tl, P)]
        elif e.kind == INFLECTION:
            loc = K.local([u])
            tests = [("antipodal_pair_at_inflection", K.ambient, loc.T[0]),
                     ("antipodal_pair_at_inflection", Tl, loc.p[0]),
                     ("normal_tangent_at_inflection", D, loc.T[0]),
                     ("normal_tangent_at_inflection", Tl, loc.N[0])]
        else:
            continue
        for code, A, x in tests:
            for t, val in _near_zero(K, lambda tt, A=A, x=x: _gap(A.derivs(tt, 0)[0], x), sing, n):
                out.append(_v(code, (u, t), f"{CODES[code]} (gap {val:.2e})", kind=e.kind))
    return out


CHECKS = (check_crossings, check_singular_tangents, check_three_point, check_normal_tangent,
          check_singular_pairs)


def dedupe(out):
    seen, uniq = set(), []
    for v in out:
        key = (v["code"], tuple(round(x, 9) for x in v["params"]))
        if key not in seen:
            seen.add(key)
            uniq.append(v)
    return uniq


def check_genericity(K: CurveModel, events, diagnostics=None):
    """All violations found on ``events``; an empty list means none was detected."""
    out = []
    for chk in CHECKS:
        out += chk(K, events)
    out += check_flags(events)
    out += check_diagnostics(diagnostics)
    return dedupe(out)
