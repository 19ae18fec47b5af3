"""K-bar: the curve together with the tangent geodesics at its inflection points.

Each inflection geodesic is parametrised on the sphere by
``alpha(theta) = cos(theta) p + sin(theta) T`` for ``theta`` in (0, pi), which
covers the projective line minus the inflection point once.  Its normal
direction ``nu`` is a constant vector on that lift; seen in the projective
plane it therefore points to opposite sides on the two ends near ``p``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import ambient as amb
from .classify import check_crossing_angle, sector_label
from .curve import CurveModel
from .errors import BendUnstable, GenericityError, SectorAmbiguous
from .events import CROSSING, NORMAL_TANGENT, Event, _tup
from .identities import CountReport, count_report
from .roots import circ_dist, sign_change_roots

# Which side the normal of an inflection geodesic points to, relative to the
# curvature side of K just after the inflection.  With -1 the normal agrees
# with the side K curves toward just before the inflection.
NU_SIGN = -1


def _unit(v):
    return v / np.linalg.norm(v)


@dataclass(frozen=True)
class InflectionGeodesic:
    u: float           # anchor inflection parameter
    p: np.ndarray      # unit lift of the inflection point
    T: np.ndarray      # unit tangent at p
    nu: np.ndarray     # normal direction, a unit pole of the geodesic

    @property
    def pole(self):
        return np.cross(self.p, self.T)

    def point(self, theta):
        return math.cos(theta) * self.p + math.sin(theta) * self.T

    def tangent(self, theta):
        return -math.sin(theta) * self.p + math.cos(theta) * self.T

    def locate(self, x):
        """(theta, s) with ``s * x == alpha(theta)``, theta in [0, pi)."""
        theta = math.atan2(float(x @ self.T), float(x @ self.p))
        s = 1.0
        if theta < 0:
            theta += math.pi
            s = -1.0
        return theta, s

    def center(self):
        """Center of curvature of every point of the geodesic: pi/2 along nu."""
        return self.nu


@dataclass
class AugmentedModel:
    base: CurveModel
    geodesics: list = field(default_factory=list)

    @property
    def inflections(self):
        return [g.u for g in self.geodesics]


def _curvature_sign_after(K: CurveModel, u: float) -> float:
    eps = K.config.eps_frac * K.L
    return float(np.sign(K.local([u + eps]).det[0]))


def build_kbar(K: CurveModel, inflections=None) -> AugmentedModel:
    from .curve import inflection_params
    if inflections is None:
        inflections = inflection_params(K)
    geos = []
    for u in inflections:
        loc = K.local([u])
        nu = NU_SIGN * _curvature_sign_after(K, u) * loc.N[0]
        geos.append(InflectionGeodesic(float(u), loc.p[0], loc.T[0], nu))
    return AugmentedModel(K, geos)


# ---------------------------------------------------------------- bending

def _bent_probes(x, T, nu, eps, kappa):
    out = []
    for sgn in (-1.0, 1.0):
        y = x + sgn * eps * T + 0.5 * kappa * eps * eps * nu
        out.append(y / np.linalg.norm(y))
    return np.array(out)


def _geodesic_frame(g: InflectionGeodesic, x):
    """Tangent and normal of ``g`` transported to the representative ``x``."""
    theta, s = g.locate(x)
    return s * g.tangent(theta), s * g.nu, theta


def _stable_label(K, x, T1, T2, probes1_fn, probes2_fn, where):
    check_crossing_angle(K, T1, T2)
    labels = set()
    for kappa in K.config.kappa_bend:
        lab = sector_label(x, T1, T2, probes1_fn(kappa), probes2_fn(kappa))
        if lab is None:
            raise SectorAmbiguous(f"crossing with an inflection geodesic at {where}")
        labels.add(lab)
    if len(labels) != 1:
        raise BendUnstable(f"label changes with the bend at {where}")
    return labels.pop()


def _near_end(K, theta):
    tol = K.config.tol_ang
    return theta < tol or theta > math.pi - tol


def curve_geodesic_crossings(A: AugmentedModel, violations=None):
    K = A.base
    eps = K.config.eps_frac * K.L
    out = []
    for gi, g in enumerate(A.geodesics):
        pole = g.pole

        def f(t, pole=pole):
            return K.ambient.derivs(t, 0)[0] @ pole

        for v in sign_change_roots(f, K.L, 8 * K.config.grid, closure=K.sigma):
            if circ_dist(v, g.u, K.L) < K.delta_cusp:
                continue     # the inflection itself is not a crossing
            x = K.point([v])[0]
            T2, nux, theta = _geodesic_frame(g, x)
            ev = Event(CROSSING, (float(v), float(g.u)), "curve-geodesic", location=(_tup(x),),
                       roles=("curve", "inflection_geodesic"))
            if K.near_cusp(v) or _near_end(K, theta):
                _violate(violations, "crossing_near_singular_point", ev)
                out.append(ev.flagged("crossing_near_singular_point"))
                continue
            T1 = K.local([v]).T[0]
            p1 = np.array([_unit(y) for y in K.ambient.derivs([v - eps, v + eps], 0)[0]])
            p1 = p1 * np.sign(p1 @ x)[:, None]
            try:
                lab = _stable_label(K, x, T1, T2, lambda k: p1,
                                    lambda k: _bent_probes(x, T2, nux, eps, k), ev.params)
            except (GenericityError, SectorAmbiguous, BendUnstable) as exc:
                code = getattr(exc, "code", type(exc).__name__)
                _violate(violations, code, ev)
                out.append(ev.flagged(code))
                continue
            out.append(ev.labeled(lab))
    return out


def geodesic_geodesic_crossings(A: AugmentedModel, violations=None):
    K = A.base
    eps = K.config.eps_frac * K.L
    out = []
    G = A.geodesics
    for i in range(len(G)):
        for j in range(i + 1, len(G)):
            g, h = G[i], G[j]
            c = np.cross(g.pole, h.pole)
            ev = Event(CROSSING, (g.u, h.u), "geodesic-geodesic",
                       roles=("inflection_geodesic", "inflection_geodesic"))
            if np.linalg.norm(c) < K.config.tol_ang:
                _violate(violations, "coincident_inflection_geodesics", ev)
                out.append(ev.flagged("coincident_inflection_geodesics"))
                continue
            x = _unit(c)
            ev = Event(CROSSING, (g.u, h.u), "geodesic-geodesic", location=(_tup(x),),
                       roles=ev.roles)
            T1, n1, th1 = _geodesic_frame(g, x)
            T2, n2, th2 = _geodesic_frame(h, x)
            if _near_end(K, th1) or _near_end(K, th2):
                _violate(violations, "crossing_near_singular_point", ev)
                out.append(ev.flagged("crossing_near_singular_point"))
                continue
            try:
                lab = _stable_label(K, x, T1, T2, lambda k: _bent_probes(x, T1, n1, eps, k),
                                    lambda k: _bent_probes(x, T2, n2, eps, k), ev.params)
            except (GenericityError, SectorAmbiguous, BendUnstable) as exc:
                code = getattr(exc, "code", type(exc).__name__)
                _violate(violations, code, ev)
                out.append(ev.flagged(code))
                continue
            out.append(ev.labeled(lab))
    return out


def geodesic_normal_tangent_pairs(A: AugmentedModel, violations=None):
    """Pairs (alpha, q): alpha on an inflection geodesic whose normal is tangent to K at q.

    The normal geodesic at alpha runs through the pole of the inflection
    geodesic, so q ranges over the points whose tangent geodesic contains it.
    """
    K = A.base
    D = amb.dual_of(K.ambient)
    cs = np.sort(np.asarray(K.cusps, dtype=float))
    closure = (-1.0) ** len(cs)
    specials = list(K.cusps) + [g.u for g in A.geodesics]
    out = []
    for g in A.geodesics:
        pole = g.pole

        def f(t, pole=pole):
            w = (-1.0) ** np.searchsorted(cs, np.atleast_1d(t) % K.L)
            return (D.derivs(t, 0)[0] @ pole) * w

        for q in sign_change_roots(f, K.L, 8 * K.config.grid, closure=closure):
            xq = K.point([q])[0]
            Nq = K.local([q]).N[0]
            alpha = _unit(np.cross(pole, Nq))
            theta, s = g.locate(alpha)
            a = s * alpha
            ev = Event(NORMAL_TANGENT, (float(g.u), float(q)), "geodesic",
                       location=(_tup(a), _tup(xq)), roles=("inflection_geodesic", "point"))
            if any(circ_dist(q, c, K.L) < K.delta_cusp for c in specials) or _near_end(K, theta):
                _violate(violations, "event_near_singular_point", ev)
                out.append(ev.flagged("event_near_singular_point"))
                continue
            phi = math.atan2(float(xq @ g.nu), float(xq @ a)) % math.pi
            if abs(phi - math.pi / 2) < K.config.tol_half_pi:
                _violate(violations, "normal_tangent_center_hit", ev)
                out.append(ev.flagged("normal_tangent_center_hit"))
                continue
            out.append(ev.labeled(2 if phi < math.pi / 2 else 1))
    return out


def _violate(violations, code, ev):
    if violations is not None:
        violations.append({"code": code, "kind": ev.kind, "subkind": ev.subkind,
                           "params": [float(x) for x in ev.params],
                           "message": f"{ev.subkind} event at {tuple(round(x, 9) for x in ev.params)}"})


def kbar_events(A: AugmentedModel, violations=None):
    return (curve_geodesic_crossings(A, violations) + geodesic_geodesic_crossings(A, violations)
            + geodesic_normal_tangent_pairs(A, violations))


def kbar_counts(A: AugmentedModel, base_events, violations=None) -> CountReport:
    """Counts for K-bar: the base events plus those involving inflection geodesics."""
    extra = kbar_events(A, violations)
    counted = [e for e in list(base_events) + extra
               if e.kind in ("Cusp", "Inflection") or e.type_label in (1, 2)]
    return count_report(counted, kbar=True)
