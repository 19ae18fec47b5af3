"""Detection of crossings, double supporting geodesics, inflections, cusps,
antipodal pairs and normal-tangent pairs.

Every two-parameter event is a projective coincidence ``[A(s)] = [B(t)]`` of
two curves built from the ambient lift F:

=====================  ==========================  =================
event                  A(s)                        B(t)
=====================  ==========================  =================
crossing               F                           F
tangent-tangent        F x F'                      F x F'
antipodal pair         (F x F') x F                F
normal-tangent pair    (F x F') x F                F x F'
=====================  ==========================  =================

Coincidences are seeded on a grid and refined with a damped two-variable
Newton iteration in a gnomonic chart, which is projectively invariant so no
lift matching is needed.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import minimize_scalar

from . import ambient as amb
from . import kernels
from .curve import CurveModel, inflection_params
from .errors import DoubleZero, Type2Cusp, VelocityNotZero
from .projective import canonical
from .roots import circ_dist, periodic_grid, sign_change_roots

log = logging.getLogger(__name__)

CROSSING = "Crossing"
DOUBLE_SUPPORTING = "DoubleSupporting"
INFLECTION = "Inflection"
CUSP = "Cusp"
ANTIPODAL = "AntipodalPair"
NORMAL_TANGENT = "NormalTangentPair"
KINDS = (CROSSING, DOUBLE_SUPPORTING, INFLECTION, CUSP, ANTIPODAL, NORMAL_TANGENT)


@dataclass(frozen=True)
class Event:
    kind: str
    params: tuple
    subkind: str | None = None
    type_label: int | None = None
    location: tuple = ()
    pole: tuple | None = None
    roles: tuple = ()
    flags: tuple = ()

    def labeled(self, label) -> "Event":
        return replace(self, type_label=label)

    def flagged(self, *flags) -> "Event":
        return replace(self, flags=tuple(sorted(set(self.flags) | set(flags))))

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "params": [float(x) for x in self.params],
             "type": self.type_label,
             "location": [[float(c) for c in p] for p in self.location]}
        if self.subkind:
            d["subkind"] = self.subkind
        if self.pole is not None:
            d["pole"] = [float(c) for c in self.pole]
        if self.roles:
            d["roles"] = list(self.roles)
        if self.flags:
            d["flags"] = list(self.flags)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Event":
        return cls(d["kind"], tuple(d["params"]), d.get("subkind"), d.get("type"),
                   tuple(tuple(p) for p in d.get("location", [])),
                   tuple(d["pole"]) if d.get("pole") is not None else None,
                   tuple(d.get("roles", ())), tuple(d.get("flags", ())))


def _tup(v) -> tuple:
    return tuple(float(c) for c in canonical(v))


def sort_events(events):
    return sorted(events, key=lambda e: (KINDS.index(e.kind), e.subkind or "", tuple(e.params)))


# ---------------------------------------------------------------- pair engine

def _unit(v):
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _speed(d):
    F, F1 = d[0], d[1]
    return np.linalg.norm(np.cross(F, F1), axis=-1) / np.einsum("ij,ij->i", F, F)


def _basis(x):
    helper = np.eye(3)[np.argmin(np.abs(x), axis=1)]
    e1 = _unit(np.cross(x, helper))
    e2 = np.cross(x, e1)
    return e1, e2


def _dot(a, b):
    return np.einsum("ij,ij->i", a, b)


def _chart(dA, dB):
    """Residual and Jacobian of g(A(s)) - g(B(t)) in the chart centred at A(s)."""
    A0, A1 = dA[0], dA[1]
    B0, B1 = dB[0], dB[1]
    x0 = _unit(A0)
    e1, e2 = _basis(x0)
    ax = _dot(A0, x0)
    bx = _dot(B0, x0)
    b1x = _dot(B1, x0)
    R = -np.stack([_dot(B0, e1) / bx, _dot(B0, e2) / bx], axis=1)
    ga = np.stack([_dot(A1, e1) / ax, _dot(A1, e2) / ax], axis=1)
    gb = np.stack([(_dot(B1, e1) * bx - _dot(B0, e1) * b1x) / bx ** 2,
                   (_dot(B1, e2) * bx - _dot(B0, e2) * b1x) / bx ** 2], axis=1)
    J = np.stack([ga, -gb], axis=2)
    return R, J


def _sin_gap(A, B, s, t):
    a = _unit(A.derivs(s, 0)[0])
    b = _unit(B.derivs(t, 0)[0])
    return np.linalg.norm(np.cross(a, b), axis=-1)


def newton_pairs(A, B, s, t, L, maxit=50, tol=1e-12):
    """Damped Newton for [A(s)] = [B(t)] from arrays of seeds.

    Returns (s, t, converged, residual) where residual is sin of the
    remaining projective gap.
    """
    s = np.array(s, dtype=float)
    t = np.array(t, dtype=float)
    alive = np.ones(len(s), dtype=bool)
    with np.errstate(all="ignore"):
        for _ in range(maxit):
            idx = np.flatnonzero(alive)
            if len(idx) == 0:
                break
            dA = A.derivs(s[idx], 1)
            dB = B.derivs(t[idx], 1)
            R, J = _chart(dA, dB)
            nr = np.linalg.norm(R, axis=1)
            done = (nr < tol) | ~np.isfinite(nr)
            alive[idx[done]] = False
            keep = ~done
            idx, R, J, nr = idx[keep], R[keep], J[keep], nr[keep]
            if len(idx) == 0:
                break
            det = J[:, 0, 0] * J[:, 1, 1] - J[:, 0, 1] * J[:, 1, 0]
            ok = np.abs(det) > 1e-300
            alive[idx[~ok]] = False
            idx, R, J, nr, det = idx[ok], R[ok], J[ok], nr[ok], det[ok]
            ds = -(J[:, 1, 1] * R[:, 0] - J[:, 0, 1] * R[:, 1]) / det
            dt = -(-J[:, 1, 0] * R[:, 0] + J[:, 0, 0] * R[:, 1]) / det
            size = np.hypot(ds, dt)
            cap = 0.05 * L
            scale = np.where(size > cap, cap / size, 1.0)
            ds *= scale
            dt *= scale
            merit0 = _sin_gap(A, B, s[idx], t[idx])
            lam = np.ones(len(idx))
            pending = np.ones(len(idx), dtype=bool)
            for _h in range(30):
                j = np.flatnonzero(pending)
                if len(j) == 0:
                    break
                m = _sin_gap(A, B, s[idx[j]] + lam[j] * ds[j], t[idx[j]] + lam[j] * dt[j])
                better = m < merit0[j] * (1 - 1e-4 * lam[j]) + 1e-300
                better |= m < 1e-15
                pending[j[better]] = False
                lam[j[~better]] *= 0.5
            stuck = pending
            alive[idx[stuck]] = False
            mv = ~stuck
            s[idx[mv]] += lam[mv] * ds[mv]
            t[idx[mv]] += lam[mv] * dt[mv]
        res = _sin_gap(A, B, s, t)
    conv = np.isfinite(res) & (res < 1e-10)
    return s % L, t % L, conv, res


def _dedup(P, L, tol, unordered):
    """Cluster parameter pairs within ``tol`` on the torus; keep one per cluster."""
    if len(P) == 0:
        return P.reshape(0, 2)
    order = np.lexsort((P[:, 1], P[:, 0]))
    P = P[order]
    kept = []
    for row in P:
        dup = False
        for k in kept:
            d = max(circ_dist(row[0], k[0], L), circ_dist(row[1], k[1], L))
            if unordered:
                d = min(d, max(circ_dist(row[0], k[1], L), circ_dist(row[1], k[0], L)))
            if d < tol:
                dup = True
                break
        if not dup:
            kept.append(row)
    return np.array(kept).reshape(-1, 2)


def _cusp_seeds(seeds_s, seeds_t, cusps, L, h):
    """Extra seeds near cusps, where the curve crawls and grid minima merge."""
    offs = h * np.array([-16, -8, -4, -2, -1, -0.5, 0.5, 1, 2, 4, 8, 16])
    ex_s, ex_t = [], []
    for u in cusps:
        for col, other, out_col, out_other in ((seeds_s, seeds_t, ex_s, ex_t),
                                               (seeds_t, seeds_s, ex_t, ex_s)):
            near = circ_dist(col, u, L) < 20 * h
            for o in other[near]:
                out_col.extend((u + offs) % L)
                out_other.extend([o] * len(offs))
    return np.asarray(ex_s), np.asarray(ex_t)


def find_pairs(A, B, L, config, same=False, grid=None, diagnostics=None, min_sep=None, cusps=()):
    """All (s, t) in [0, L)^2 with [A(s)] = [B(t)].

    With ``same`` the problem is symmetric and only s < t off the diagonal is
    returned.  Seeds whose refinement fails are appended to ``diagnostics``.
    Seeds touching a parameter in ``cusps`` are fanned out around it.
    """
    n = grid or config.grid
    h = L / n
    t = periodic_grid(L, n)
    dA = A.derivs(t, 1)
    a = _unit(dA[0])
    sa = _speed(dA)
    if same:
        b, sb = a, sa
    else:
        dB = B.derivs(t, 1)
        b = _unit(dB[0])
        sb = _speed(dB)
    good_a = np.isfinite(a).all(axis=1)
    good_b = np.isfinite(b).all(axis=1)
    a = np.where(good_a[:, None], a, 0.0)
    b = np.where(good_b[:, None], b, 0.0)
    sa = np.where(np.isfinite(sa), sa, 0.0)
    sb = np.where(np.isfinite(sb), sb, 0.0)
    seeds = kernels.grid_seeds(np.ascontiguousarray(a), np.ascontiguousarray(b),
                               np.ascontiguousarray(sa), np.ascontiguousarray(sb),
                               h, 3.0, 2, bool(same))
    if len(seeds) == 0:
        return np.zeros((0, 2))
    s0 = t[seeds[:, 0]]
    t0 = t[seeds[:, 1]]
    if len(cusps):
        es, et = _cusp_seeds(s0, t0, cusps, L, h)
        s0, t0 = np.concatenate([s0, es]), np.concatenate([t0, et])
    s, tt, conv, res = newton_pairs(A, B, s0, t0, L, config.newton_iter, config.newton_tol)
    if diagnostics is not None:
        for i in np.flatnonzero(~conv):
            diagnostics.append({"code": "RefinementDiverged", "seed": [float(s0[i]), float(t0[i])],
                                "residual": float(res[i]) if np.isfinite(res[i]) else None})
    P = np.column_stack([s[conv], tt[conv]])
    if same:
        sep = 4 * h if min_sep is None else min_sep
        P = P[circ_dist(P[:, 0], P[:, 1], L) > sep]
        P = np.sort(P, axis=1)
    return _dedup(P, L, config.dedup_frac * L, unordered=same)


# ---------------------------------------------------------------- finders

def _near_any(t, params, L, tol):
    return any(circ_dist(t, c, L) < tol for c in params)


def find_crossings(K: CurveModel, grid=None, diagnostics=None):
    P = find_pairs(K.ambient, K.ambient, K.L, K.config, same=True, grid=grid, diagnostics=diagnostics,
                   cusps=K.cusps)
    out = []
    for s, t in P:
        loc = K.local([s, t])
        x = loc.p[0]
        flags = []
        if abs(float(np.linalg.norm(np.cross(loc.T[0], loc.T[1])))) < K.config.tol_ang:
            flags.append("tangential_contact")
        if K.near_cusp(s) or K.near_cusp(t):
            flags.append("near_cusp")
        out.append(Event(CROSSING, (float(s), float(t)), location=(_tup(x),), flags=tuple(flags)))
    return out


def find_inflections(K: CurveModel):
    roots = inflection_params(K)
    _check_double_zero(K, roots)
    loc = K.local(roots) if len(roots) else None
    return [Event(INFLECTION, (float(r),), location=(_tup(loc.p[i]),)) for i, r in enumerate(roots)]


def _check_double_zero(K, roots):
    n = 8 * K.config.grid
    t = periodic_grid(K.L, n)
    kg = np.abs(K.local(t).kg)
    kg = np.where(np.isfinite(kg), kg, np.inf)
    lm = np.flatnonzero((kg <= np.roll(kg, 1)) & (kg <= np.roll(kg, -1)))
    h = K.L / n
    for i in lm:
        if kg[i] > 1e-3:
            continue
        if _near_any(t[i], roots, K.L, 2 * h) or K.near_cusp(t[i]):
            continue
        r = minimize_scalar(lambda x: abs(float(K.local([x]).kg[0])), bounds=(t[i] - h, t[i] + h),
                            method="bounded", options={"xatol": 1e-13})
        if r.fun < 100 * K.config.tol_kg:
            raise DoubleZero(f"geodesic curvature touches zero without sign change at t={r.x:.9g}")


def _speed_at(K, u):
    return float(_speed(K.ambient.derivs([u], 1))[0])


def refine_cusp(K: CurveModel, u: float, window: float | None = None) -> tuple[float, float]:
    w = window or K.delta_cusp
    r = minimize_scalar(lambda x: _speed_at(K, x), bounds=(u - w, u + w), method="bounded",
                        options={"xatol": 1e-14})
    return float(r.x) % K.L, float(r.fun)


def cusp_direction(K: CurveModel, u: float):
    """Unit point P and the direction v into which both branches leave the cusp."""
    F, F1, F2 = K.ambient.derivs([u], 2)
    P = _unit(F)[0]
    v = F2[0] - (F2[0] @ P) * P
    return P, v / np.linalg.norm(v)


def cusp_side(K: CurveModel, u: float, eps: float | None = None) -> tuple[float, float]:
    """Signed offsets of the two branches from the limit tangent geodesic."""
    eps = eps or K.config.eps_frac * K.L
    P, v = cusp_direction(K, u)
    w = np.cross(P, v)
    pts = _unit(K.ambient.derivs([u - eps, u + eps], 0)[0])
    pts = pts * np.sign(pts @ P)[:, None]
    return float(pts[0] @ w), float(pts[1] @ w)


def detect_cusp_params(K: CurveModel):
    """Parameters where the projective speed dips below ``v_min``."""
    n = 8 * K.config.grid
    t = periodic_grid(K.L, n)
    sp = _speed(K.ambient.derivs(t, 1))
    lm = np.flatnonzero((sp <= np.roll(sp, 1)) & (sp <= np.roll(sp, -1)))
    h = K.L / n
    found = []
    median = float(np.median(sp))
    for i in lm:
        if sp[i] > 0.05 * median:
            continue
        u, v = refine_cusp(K, t[i], 2 * h)
        if v < K.config.v_min and not _near_any(u, found, K.L, h):
            found.append(u)
    return sorted(found)


def find_cusps(K: CurveModel, detect: bool = True):
    """Verify declared cusps (and detected ones) are ordinary cusps."""
    cand = list(K.cusps)
    if detect:
        for u in detect_cusp_params(K):
            if not _near_any(u, cand, K.L, K.delta_cusp):
                cand.append(u)
    out = []
    for u0 in sorted(cand):
        u, v = refine_cusp(K, u0)
        if v > K.config.v_min:
            raise VelocityNotZero(f"speed {v:.3g} at declared cusp t={u0:.9g}")
        lo, hi = cusp_side(K, u)
        if lo * hi >= 0:
            raise Type2Cusp(f"both branches on one side of the cusp tangent at t={u:.9g}")
        P, _ = cusp_direction(K, u)
        out.append(Event(CUSP, (u,), type_label=1, location=(_tup(P),), flags=("verified_type1",)))
    return out


def _dual_sign_lift(K: CurveModel, cusps):
    """Scalar weight flipping sign at each cusp so the dual lift F x F' stays continuous."""
    cs = np.sort(np.asarray(cusps, dtype=float))

    def sgn(t):
        t = np.atleast_1d(t) % K.L
        return (-1.0) ** np.searchsorted(cs, t)

    return sgn


def _support_flags(K, x, y):
    d = math.acos(min(1.0, abs(float(x @ y))))
    if abs(d - math.pi / 2) < K.config.tol_half_pi:
        return ("near_half_pi",)
    return ()


def find_double_supporting(K: CurveModel, cusps=None, inflections=None, grid=None, diagnostics=None):
    cusps = list(K.cusps) if cusps is None else list(cusps)
    if inflections is None:
        inflections = list(inflection_params(K))
    D = amb.dual_of(K.ambient)
    out = []
    P = find_pairs(D, D, K.L, K.config, same=True, grid=grid, diagnostics=diagnostics,
                   cusps=cusps)
    specials = list(cusps) + list(inflections)
    for s, t in P:
        if _near_any(s, specials, K.L, K.delta_cusp) or _near_any(t, specials, K.L, K.delta_cusp):
            if diagnostics is not None:
                diagnostics.append({"code": "EventNearSingularPoint", "kind": DOUBLE_SUPPORTING,
                                    "params": [float(s), float(t)]})
            continue
        loc = K.local([s, t])
        out.append(Event(DOUBLE_SUPPORTING, (float(s), float(t)), "tangent-tangent",
                         location=(_tup(loc.p[0]), _tup(loc.p[1])), pole=_tup(loc.N[0]),
                         roles=("tangent", "tangent"), flags=_support_flags(K, loc.p[0], loc.p[1])))
    # tangent geodesics through a cusp point
    wsign = _dual_sign_lift(K, cusps)
    for u in cusps:
        Pu = K.point([u])[0]

        def h(s, Pu=Pu):
            return (D.derivs(s, 0)[0] @ Pu) * wsign(s)

        closure = (-1.0) ** len(cusps)
        for s in sign_change_roots(h, K.L, 8 * (grid or K.config.grid), closure=closure):
            if _near_any(s, specials, K.L, K.delta_cusp):
                continue
            loc = K.local([s])
            params, locs, roles = (float(s), float(u)), (_tup(loc.p[0]), _tup(Pu)), ("tangent", "cusp")
            if u < s:
                params, locs, roles = params[::-1], locs[::-1], roles[::-1]
            out.append(Event(DOUBLE_SUPPORTING, params, "tangent-cusp", location=locs,
                             pole=_tup(loc.N[0]), roles=roles,
                             flags=_support_flags(K, loc.p[0], Pu)))
    for i in range(len(cusps)):
        for j in range(i + 1, len(cusps)):
            u1, u2 = sorted((cusps[i], cusps[j]))
            P1, P2 = K.point([u1, u2])
            out.append(Event(DOUBLE_SUPPORTING, (float(u1), float(u2)), "cusp-cusp",
                             location=(_tup(P1), _tup(P2)), pole=_tup(np.cross(P1, P2)),
                             roles=("cusp", "cusp"), flags=_support_flags(K, P1, P2)))
    return out


def find_antipodal_pairs(K: CurveModel, cusps=None, grid=None, diagnostics=None, at_cusps=False):
    """Ordered pairs (s, t) with gamma(t) = a_p, p = gamma(s).

    With ``at_cusps`` the pairs whose first point is a cusp are included: the
    tangent direction sweeps the whole pencil there, so the antipodal point
    runs along the polar geodesic of the cusp and meets K at isolated points.
    """
    cusps = list(K.cusps) if cusps is None else list(cusps)
    Tl = amb.indicatrix_of(K.ambient)
    P = find_pairs(Tl, K.ambient, K.L, K.config, same=False, grid=grid, diagnostics=diagnostics,
                   cusps=cusps)
    out = []
    for s, t in P:
        if _near_any(s, cusps, K.L, K.delta_cusp) or _near_any(t, cusps, K.L, K.delta_cusp):
            if diagnostics is not None:
                diagnostics.append({"code": "EventNearSingularPoint", "kind": ANTIPODAL,
                                    "params": [float(s), float(t)]})
            continue
        loc = K.local([s, t])
        out.append(Event(ANTIPODAL, (float(s), float(t)), location=(_tup(loc.p[0]), _tup(loc.p[1]))))
    # both (p, q) and (q, p) antipodal: each ordered pair still counts, but is marked
    tol = 10 * K.config.dedup_frac * K.L
    for k, e in enumerate(out):
        s, t = e.params
        if any(circ_dist(s, f.params[1], K.L) < tol and circ_dist(t, f.params[0], K.L) < tol
               for f in out):
            out[k] = e.flagged("symmetric")
    if at_cusps:
        for u in cusps:
            Pu = K.point([u])[0]

            def h(t, Pu=Pu):
                return K.ambient.derivs(t, 0)[0] @ Pu

            for t in sign_change_roots(h, K.L, 8 * (grid or K.config.grid), closure=K.sigma):
                q = K.point([t])[0]
                out.append(Event(ANTIPODAL, (float(u), float(t)), "cusp",
                                 location=(_tup(Pu), _tup(q)), roles=("cusp", "point")))
    return out


def find_normal_tangent_pairs(K: CurveModel, cusps=None, inflections=None, grid=None,
                              diagnostics=None, at_cusps=False):
    """Ordered pairs (s, t) whose normal geodesic at s is the tangent geodesic at t."""
    cusps = list(K.cusps) if cusps is None else list(cusps)
    if inflections is None:
        inflections = list(inflection_params(K))
    Tl = amb.indicatrix_of(K.ambient)
    D = amb.dual_of(K.ambient)
    P = find_pairs(Tl, D, K.L, K.config, same=False, grid=grid, diagnostics=diagnostics,
                   cusps=cusps)
    out = []
    specials = list(cusps) + list(inflections)
    for s, t in P:
        if _near_any(s, specials, K.L, K.delta_cusp) or _near_any(t, specials, K.L, K.delta_cusp):
            if diagnostics is not None:
                diagnostics.append({"code": "EventNearSingularPoint", "kind": NORMAL_TANGENT,
                                    "params": [float(s), float(t)]})
            continue
        loc = K.local([s, t])
        out.append(Event(NORMAL_TANGENT, (float(s), float(t)), location=(_tup(loc.p[0]), _tup(loc.p[1]))))
    if at_cusps and cusps:
        wsign = _dual_sign_lift(K, cusps)
        for u in cusps:
            Pu = K.point([u])[0]

            def h(t, Pu=Pu):
                return (D.derivs(t, 0)[0] @ Pu) * wsign(t)

            closure = (-1.0) ** len(cusps)
            for t in sign_change_roots(h, K.L, 8 * (grid or K.config.grid), closure=closure):
                if _near_any(t, specials, K.L, K.delta_cusp):
                    continue
                q = K.point([t])[0]
                out.append(Event(NORMAL_TANGENT, (float(u), float(t)), "cusp",
                                 location=(_tup(Pu), _tup(q)), roles=("cusp", "point")))
            # normal geodesics of K through the cusp point: tangent to the bump there

            def g(s, Pu=Pu):
                return (Tl.derivs(s, 0)[0] @ Pu) * wsign(s)

            closure_t = K.sigma * (-1.0) ** len(cusps)
            for s in sign_change_roots(g, K.L, 8 * (grid or K.config.grid), closure=closure_t):
                if _near_any(s, specials, K.L, K.delta_cusp):
                    continue
                p = K.point([s])[0]
                out.append(Event(NORMAL_TANGENT, (float(s), float(u)), "cusp-tangent",
                                 location=(_tup(p), _tup(Pu)), roles=("point", "cusp")))
    return out
