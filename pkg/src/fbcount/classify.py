"""Type 1 / type 2 labels for crossings, double supporting geodesics,
antipodal pairs and normal-tangent pairs.
"""
from __future__ import annotations

import math

import numpy as np

from .curve import CurveModel, frame_at
from .errors import GenericityError, OnBoundary, SectorAmbiguous
from .events import (ANTIPODAL, CROSSING, DOUBLE_SUPPORTING, NORMAL_TANGENT, Event,
                     cusp_direction)
from .projective import OrientedGeodesic, ProjectivePoint, point_along, region_class

# Curvature sign of the small bump that replaces a cusp, relative to the
# (constant) curvature sign of the two cusp branches.
BUMP_SIGN = 1


def _unit(v):
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _match(v, ref):
    """Flip rows of ``v`` onto the hemisphere of ``ref``."""
    return v * np.where(v @ ref < 0, -1.0, 1.0)[..., None]


def _eps(K, eps):
    return K.config.eps_frac * K.L if eps is None else eps


# ---------------------------------------------------------------- crossings

def sector_label(x, T1, T2, probes1, probes2):
    """Crossing type from probe points on the two branches through ``x``.

    ``T1``/``T2`` are unit tangent vectors at ``x``; probes are unit vectors
    near ``x`` on the same sheet.  Returns 1, 2, or None when a probe sits
    too close to a tangent line to be placed in a sector.
    """
    c = float(T1 @ T2)
    det = 1.0 - c * c
    hits = []
    for branch, probes in ((0, probes1), (1, probes2)):
        for y in probes:
            v = y - (y @ x) * x
            v1, v2 = float(v @ T1), float(v @ T2)
            a = (v1 - c * v2) / det
            b = (v2 - c * v1) / det
            if min(abs(a), abs(b)) <= 1e-9 * max(abs(a), abs(b)) + 1e-300:
                return None
            if a * b * c > 0:
                # the acute sector holding +T1 is alpha, its vertical partner beta
                hits.append((branch, "alpha" if a > 0 else "beta"))
    if len(hits) != 2 or hits[0][0] == hits[1][0]:
        return None
    return 1 if hits[0][1] != hits[1][1] else 2


def check_crossing_angle(K: CurveModel, T1, T2):
    phi = math.acos(min(1.0, abs(float(T1 @ T2))))
    if phi < K.config.tol_ang:
        raise GenericityError("crossing_tangents_parallel", f"angle {phi:.3g}")
    if abs(phi - math.pi / 2) < K.config.tol_ang:
        raise GenericityError("crossing_tangents_perpendicular", f"angle {phi:.6g}")
    return phi


def _branch(K, t, x, eps):
    loc = K.local([t])
    sgn = 1.0 if loc.p[0] @ x >= 0 else -1.0
    T = loc.T[0] * sgn
    pr = _match(_unit(K.ambient.derivs([t - eps, t + eps], 0)[0]), x)
    return T, pr


def crossing_label_at(K: CurveModel, e: Event, eps: float):
    s, t = e.params
    x = K.point([s])[0]
    T1, p1 = _branch(K, s, x, eps)
    T2, p2 = _branch(K, t, x, eps)
    check_crossing_angle(K, T1, T2)
    return sector_label(x, T1, T2, p1, p2)


def classify_crossing(K: CurveModel, e: Event, eps: float | None = None) -> int:
    eps = _eps(K, eps)
    for ee in (eps, eps / 2):
        lab = crossing_label_at(K, e, ee)
        if lab is not None:
            return lab
    raise SectorAmbiguous(f"crossing at {e.params}")


# ---------------------------------------------------------------- supporting geodesics

def _endpoint_side(K, t, role, ref, w, eps):
    pr = _match(_unit(K.ambient.derivs([t - eps, t + eps], 0)[0]), ref)
    s1, s2 = float(np.sign(pr[0] @ w)), float(np.sign(pr[1] @ w))
    if s1 != s2 or s1 == 0:
        code = "mixed_side_at_tangency" if role == "tangent" else "cusp_branches_disagree"
        raise GenericityError(code, f"t={t:.9g}")
    return s1


def classify_double_supporting(K: CurveModel, e: Event, eps: float | None = None) -> int:
    eps = _eps(K, eps)
    s, t = e.params
    roles = e.roles or ("tangent", "tangent")
    p, q = K.point([s, t])
    if p @ q < 0:
        q = -q
    d = math.acos(min(1.0, float(p @ q)))
    if abs(d - math.pi / 2) < K.config.tol_half_pi:
        raise GenericityError("near_half_pi", f"support distance {d:.9g}")
    w = _unit(np.cross(p, q))
    a = _endpoint_side(K, s, roles[0], p, w, eps)
    b = _endpoint_side(K, t, roles[1], q, w, eps)
    return 1 if a == b else 2


# ---------------------------------------------------------------- antipodal pairs

def _cusp_curvature_sign(K, u):
    eps = K.config.eps_frac * K.L
    det = K.local([u - eps, u + eps]).det
    return float(np.sign(det[0] + det[1]))


def bump_frame(K: CurveModel, u: float, q):
    """Tangent and oriented normal on the bump at cusp ``u`` whose tangent geodesic meets ``q``.

    ``q`` must be a unit tangent vector at the cusp point (q . P = 0).
    """
    P, v = cusp_direction(K, u)
    sk = _cusp_curvature_sign(K, u) * BUMP_SIGN
    wp = -sk * np.cross(P, v)
    phi = math.atan2(float(q @ wp), float(-(q @ v))) % math.pi
    T = -math.cos(phi) * v + math.sin(phi) * wp
    n = sk * np.cross(P, T)
    return P, T, n


def _antipodal_regions(K, e):
    s, t = e.params
    if e.subkind == "cusp":
        q = K.point([t])[0]
        P, _v = cusp_direction(K, s)
        q = q - (q @ P) * P
        q = q / np.linalg.norm(q)
        P, Tp, n = bump_frame(K, s, q)
        center = P
    else:
        f = frame_at(K, s)
        Tp, n = f.T, f.n
        center = math.cos(f.rho) * f.lift + math.sin(f.rho) * f.n
        q = K.point([t])[0]
    loc = K.local([t])
    Tq = loc.T[0]
    Nq = loc.N[0]
    Np = np.cross(center if e.subkind == "cusp" else f.lift, Tp)
    if np.linalg.norm(np.cross(Nq, Np)) < K.config.tol_ang:
        raise GenericityError("antipodal_tangent_equals_tau_p", f"{e.params}")
    if np.linalg.norm(np.cross(Nq, _unit(center))) < K.config.tol_ang:
        raise GenericityError("antipodal_tangent_equals_Y_p", f"{e.params}")
    return q, Tq, n, center


def classify_antipodal_pair(K: CurveModel, e: Event) -> int:
    q, Tq, n, center = _antipodal_regions(K, e)
    m = math.cos(math.pi / 4) * q + math.sin(math.pi / 4) * Tq
    a, b = float(m @ n), float(m @ center)
    if min(abs(a), abs(b)) < K.config.tol_on:
        raise OnBoundary(f"antipodal probe on a bounding geodesic at {e.params}")
    return 1 if a * b > 0 else 2


def classify_antipodal_pair_regions(K: CurveModel, e: Event) -> int:
    """Same label through the general :func:`region_class` path."""
    q, Tq, n, center = _antipodal_regions(K, e)
    tau_q = OrientedGeodesic(np.cross(q, Tq))
    m = point_along(tau_q, ProjectivePoint(q), math.pi / 4)
    g1, g2 = OrientedGeodesic(n), OrientedGeodesic(center)
    r = region_class(m, g1, g2, K.config.tol_on)
    rc = region_class(ProjectivePoint(center + 1e-3 * n), g1, g2, K.config.tol_on)
    return 1 if r == rc else 2


# ---------------------------------------------------------------- normal-tangent pairs

def normal_position(K: CurveModel, e: Event):
    """(theta, rho): arc position of q along the oriented normal from p, and |p c_p|."""
    s, t = e.params
    q = K.point([t])[0]
    if e.subkind == "cusp":
        P, _v = cusp_direction(K, s)
        # the normal geodesic at the bump point is the tangent geodesic at q
        d = q - (q @ P) * P
        d = d / np.linalg.norm(d)
        _, _, n = bump_frame(K, s, np.cross(P, d))
        p, rho = P, 0.0
    else:
        f = frame_at(K, s)
        p, n, rho = f.lift, f.n, f.rho
        if e.subkind == "cusp-tangent":
            q = cusp_direction(K, t)[0]
    theta = math.atan2(float(q @ n), float(q @ p)) % math.pi
    return theta, rho


def normal_position_alt(K: CurveModel, e: Event) -> float:
    """theta from the projective distance, with the branch chosen by a sign test."""
    s, t = e.params
    f = frame_at(K, s)
    q = K.point([t])[0]
    d = math.atan2(float(np.linalg.norm(np.cross(f.lift, q))), abs(float(f.lift @ q)))
    same = (q @ f.n) * (q @ f.lift) >= 0
    return d if same else math.pi - d


def classify_normal_tangent_pair(K: CurveModel, e: Event) -> int:
    theta, rho = normal_position(K, e)
    if abs(theta - rho) < K.config.tol_on * 100:
        raise GenericityError("normal_tangent_center_hit", f"{e.params}")
    return 2 if theta < rho else 1


def classify(K: CurveModel, e: Event) -> Event:
    if e.kind == CROSSING:
        return e.labeled(classify_crossing(K, e))
    if e.kind == DOUBLE_SUPPORTING:
        return e.labeled(classify_double_supporting(K, e))
    if e.kind == ANTIPODAL:
        return e.labeled(classify_antipodal_pair(K, e))
    if e.kind == NORMAL_TANGENT:
        return e.labeled(classify_normal_tangent_pair(K, e))
    return e
