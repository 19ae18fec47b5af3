"""Brute-force counts from a dense polyline.

Nothing here uses derivatives of the curve model or Newton refinement: the
curve is sampled at ``resolution`` points and every event is an exact
arc-arc intersection between three discrete polylines:

* ``P``, the curve itself;
* ``D``, the poles of its segments (a discrete dual curve);
* ``T``, unit vertex tangents (the points at distance pi/2 along each tangent).

Crossings are self-intersections of ``P``, tangent-tangent supporting
geodesics are self-intersections of ``D``, antipodal pairs are ``T``
against ``P`` and normal-tangent pairs are ``T`` against ``D``.  Labels are
assigned afterwards by the classifier at the parameters found here.
"""
from __future__ import annotations

import math

import numpy as np
from scipy.spatial import cKDTree

from . import classify as cl
from .curve import CurveModel
from .errors import FBError, GenericityError, ResolutionTooLow
from .events import (ANTIPODAL, CROSSING, CUSP, DOUBLE_SUPPORTING, INFLECTION, NORMAL_TANGENT,
                     Event)
from .identities import CountReport, count_report
from .kernels import arc_pairs
from .parallel import pmap

MIN_RESOLUTION = 10_000


def _unit(v):
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _aligned(X, closure):
    """Flip rows so consecutive rows share a hemisphere; append the closing row."""
    X = X.copy()
    flips = np.ones(len(X))
    dots = np.einsum("ij,ij->i", X[1:], X[:-1])
    flips[1:] = np.cumprod(np.where(dots < 0, -1.0, 1.0))
    X *= flips[:, None]
    last = closure * X[0]
    if last @ X[-1] < 0:
        last = -last
    return np.vstack([X, last])


class Polyline:
    """Closed projective polyline; segment ``i`` joins rows ``i`` and ``i + 1``."""

    def __init__(self, X, offset=0.0, closure=1.0):
        self.X = _aligned(_unit(X), closure)
        self.n = len(X)
        self.offset = offset           # parameter of row 0 in units of the step
        mid = _unit(self.X[:-1] + self.X[1:])
        self.mid = mid
        self.half = 0.5 * np.linalg.norm(self.X[1:] - self.X[:-1], axis=1)


def _intersections(A: Polyline, B: Polyline | None, skipA=None, skipB=None, band=1):
    """(i, j, u, v) of crossing segment pairs; ``B=None`` means self-intersections of A.

    Self pairs closer than ``band`` segments are ignored: nearly collinear
    neighbours make the sign tests meaningless there.
    """
    same = B is None
    B = A if same else B
    ka = np.flatnonzero(~skipA) if skipA is not None else np.arange(A.n)
    kb = np.flatnonzero(~skipB) if skipB is not None else np.arange(B.n)
    if len(ka) == 0 or len(kb) == 0:
        return np.zeros((0, 4))
    na, nb = len(ka), len(kb)
    # one tree over A and both lifts of B: projective proximity in R^3
    if same:
        pts = np.vstack([A.mid[ka], -A.mid[ka]])
        half = np.concatenate([A.half[ka], A.half[ka]])
    else:
        pts = np.vstack([A.mid[ka], B.mid[kb], -B.mid[kb]])
        half = np.concatenate([A.half[ka], B.half[kb], B.half[kb]])
    # balanced construction is very slow on points strung along a curve
    tree = cKDTree(pts, balanced_tree=False, compact_nodes=False)
    # short segments share one search radius; the few long ones get their own
    cut = float(np.quantile(half, 0.98))
    pairs = tree.query_pairs(2.1 * cut + 1e-15, output_type="ndarray")
    x, y = pairs[:, 0], pairs[:, 1]
    long_idx = np.flatnonzero(half > cut)
    if len(long_idx):
        hits = tree.query_ball_point(pts[long_idx], 1.05 * (half[long_idx] + half.max()) + 1e-15)
        lx = np.repeat(long_idx, [len(h) for h in hits])
        ly = np.fromiter((k for h in hits for k in h), dtype=np.int64, count=len(lx))
        x, y = np.concatenate([x, lx, ly]), np.concatenate([y, ly, lx])
    if same:
        i, j = ka[x % na], ka[y % na]
        d = np.abs(i - j)
        d = np.minimum(d, A.n - d)
        keep = d > band
        i, j = np.minimum(i, j)[keep], np.maximum(i, j)[keep]
    else:
        keep = (x < na) & (y >= na)
        i, j = ka[x[keep]], kb[(y[keep] - na) % nb]
        keep = (y < na) & (x >= na)
        i = np.concatenate([i, ka[y[keep]]])
        j = np.concatenate([j, kb[(x[keep] - na) % nb]])
    if len(i) == 0:
        return np.zeros((0, 4))
    key = np.unique(i.astype(np.int64) * B.n + j)
    i, j = key // B.n, key % B.n
    mask, u, v = arc_pairs(A.X, B.X, i, j)
    return np.column_stack([i[mask], j[mask], u[mask], v[mask]])


def _sign_changes(vals, closure):
    ext = np.append(vals, closure * vals[0])
    return np.flatnonzero(np.sign(ext[:-1]) * np.sign(ext[1:]) < 0)


def _near(idx, marks, n, w):
    if len(marks) == 0:
        return np.zeros(len(np.atleast_1d(idx)), dtype=bool)
    idx = np.atleast_1d(idx)[:, None]
    d = np.abs(idx - np.asarray(marks)[None, :]) % n
    d = np.minimum(d, n - d)
    return (d <= w).any(axis=1)


def _clusters(idx, n, w):
    """Group sorted indices closer than ``w``; return (center, size) per group."""
    if len(idx) == 0:
        return []
    groups = [[int(idx[0])]]
    for k in idx[1:]:
        if k - groups[-1][-1] <= w:
            groups[-1].append(int(k))
        else:
            groups.append([int(k)])
    if len(groups) > 1 and groups[0][0] + n - groups[-1][-1] <= w:
        groups[0] = groups.pop() + groups[0]
    return [(g[len(g) // 2], len(g)) for g in groups]


class Dense:
    """All discrete data for one resolution."""

    def __init__(self, K: CurveModel, n: int):
        self.K, self.n = K, n
        self.h = K.L / n
        # exclusion radius in samples around cusps and inflections
        self.w = max(3, int(np.ceil(2e-4 * n)))
        t = np.arange(n) * self.h
        self.P = Polyline(K.point(t), 0.0, K.sigma)
        X = self.P.X
        seg = X[1:] - X[:-1]
        # discrete cusps: the direction of travel reverses at a vertex
        prev = np.roll(seg, 1, axis=0)
        self.seam = float(np.sign(X[-1] @ X[0]))
        prev[0] *= self.seam
        self.cusps = np.flatnonzero(np.einsum("ij,ij->i", seg, prev) < 0)
        # discrete dual: poles of segments, at half-step parameters
        self.D = Polyline(np.cross(X[:-1], X[1:]), 0.5, 1.0)
        # vertex tangents; the turning sign uses differences to avoid cancellation
        Xi = X[:-1]
        Xm = np.vstack([X[-2][None, :], X[:-2]])
        if Xm[0] @ Xi[0] < 0:
            Xm[0] = -Xm[0]
        Xp = X[1:]
        chord = Xp - Xm
        tan = chord - np.einsum("ij,ij->i", chord, Xi)[:, None] * Xi
        self.Tv = Polyline(tan, 0.0, K.sigma)
        self.turn = np.einsum("ij,ij->i", np.cross(Xi - Xm, Xp - Xi), Xi)
        self.infl = self._inflections()

    def param(self, poly: Polyline, i, u):
        return ((i + poly.offset + u) * self.h) % self.K.L

    def _near_mask(self, marks):
        return _near(np.arange(self.n), marks, self.n, self.w)

    def _inflections(self):
        idx = _sign_changes(self.turn, self.seam)
        keep = [c for c, size in _clusters(idx, self.n, self.w) if size % 2 == 1]
        keep = np.array(keep, dtype=int)
        return keep[~_near(keep, self.cusps, self.n, self.w)] if len(keep) else keep

    # ------------------------------------------------------------ detectors

    def inflections(self):
        return [((i + 0.5) * self.h) % self.K.L for i in self.infl]

    def crossings(self):
        R = _intersections(self.P, None, band=self.w)
        out = []
        for i, j, u, v in R:
            if _near(int(i), self.cusps, self.n, self.w)[0] and \
                    _near(int(j), self.cusps, self.n, self.w)[0]:
                continue
            out.append((self.param(self.P, i, u), self.param(self.P, j, v)))
        return out

    def tangent_tangent(self):
        skip = self._near_mask(np.concatenate([self.infl, self.cusps]))
        R = _intersections(self.D, None, skip, skip, band=self.w)
        return [(self.param(self.D, i, u), self.param(self.D, j, v)) for i, j, u, v in R]

    def tangent_cusp(self):
        out = []
        Dx = self.D.X[:-1]
        closure = float(np.sign(self.D.X[-1] @ self.D.X[0]))
        for c in self.cusps:
            idx = _sign_changes(Dx @ self.P.X[c], closure)
            marks = np.concatenate([self.infl, self.cusps]).astype(int)
            idx = idx[~_near(idx, marks, self.n, self.w)]
            out += [(((i + 1.0) * self.h) % self.K.L, c) for i in idx]
        return out

    def antipodal(self):
        skip = self._near_mask(self.cusps)
        R = _intersections(self.Tv, self.P, skip, skip)
        return [(self.param(self.Tv, i, u), self.param(self.P, j, v)) for i, j, u, v in R]

    def cusp_antipodal(self):
        out = []
        Px = self.P.X[:-1]
        closure = float(np.sign(self.P.X[-1] @ self.P.X[0]))
        for c in self.cusps:
            idx = _sign_changes(Px @ self.P.X[c], closure)
            out += [(c, ((i + 0.5) * self.h) % self.K.L) for i in idx]
        return out

    def normal_tangent(self):
        skip = self._near_mask(np.concatenate([self.infl, self.cusps]))
        R = _intersections(self.Tv, self.D, skip, skip)
        return [(self.param(self.Tv, i, u), self.param(self.D, j, v)) for i, j, u, v in R]


def _refine_cusp(K, u):
    from .events import refine_cusp
    return refine_cusp(K, u, 2 * K.L / 1000)[0]


def oracle_events(K: CurveModel, resolution: int):
    """Unlabeled events found on the dense polyline."""
    if resolution < MIN_RESOLUTION:
        raise ResolutionTooLow(f"resolution {resolution} below {MIN_RESOLUTION}")
    d = Dense(K, int(resolution))
    # cusp locations are polished only so the classifier sees the exact cusp
    cusp_params = [_refine_cusp(K, c * d.h) for c in d.cusps]
    cmap = {c: u for c, u in zip(d.cusps, cusp_params)}
    infl = d.inflections()
    ev = [Event(CUSP, (float(u),), type_label=1) for u in cusp_params]
    ev += [Event(INFLECTION, (float(u),)) for u in infl]
    ev += [Event(CROSSING, tuple(sorted(map(float, p)))) for p in d.crossings()]
    ev += [Event(DOUBLE_SUPPORTING, tuple(sorted(map(float, p))), "tangent-tangent",
                 roles=("tangent", "tangent")) for p in d.tangent_tangent()]
    for s, c in d.tangent_cusp():
        u = cmap[c]
        params, roles = (s, u), ("tangent", "cusp")
        if u < s:
            params, roles = (u, s), ("cusp", "tangent")
        ev.append(Event(DOUBLE_SUPPORTING, tuple(map(float, params)), "tangent-cusp", roles=roles))
    for a in range(len(cusp_params)):
        for b in range(a + 1, len(cusp_params)):
            ev.append(Event(DOUBLE_SUPPORTING, (float(cusp_params[a]), float(cusp_params[b])),
                            "cusp-cusp", roles=("cusp", "cusp")))
    ev += [Event(ANTIPODAL, tuple(map(float, p))) for p in d.antipodal()]
    ev += [Event(ANTIPODAL, (float(cmap[c]), float(t)), "cusp", roles=("cusp", "point"))
           for c, t in d.cusp_antipodal()]
    ev += [Event(NORMAL_TANGENT, tuple(map(float, p))) for p in d.normal_tangent()]
    return d, ev


def _classify(K: CurveModel, events):
    out = []
    for e in events:
        try:
            out.append(cl.classify(K, e))
        except (GenericityError, FBError):
            out.append(e)
    return out


def oracle_counts(K: CurveModel, resolution: int | None = None, classify: bool = True,
                  check_doubling: bool = True) -> CountReport:
    """Counts from the dense polyline; with ``check_doubling`` also at twice the resolution.

    Raises ResolutionTooLow when the two resolutions disagree.
    """
    rep, _ = oracle_report(K, resolution, classify, check_doubling)
    return rep


def _report(K, resolution, classify):
    d, ev = oracle_events(K, resolution)
    Kc = K.with_cusps([e.params[0] for e in ev if e.kind == CUSP])
    if classify:
        ev = _classify(Kc, ev)
        labeled = [e for e in ev if e.kind in (CUSP, INFLECTION) or e.type_label in (1, 2)]
        rep = count_report(labeled)
    else:
        rep = _raw_counts(ev)
    return rep, ev


def _raw_counts(events) -> CountReport:
    """Kind totals only; everything is put in the type 1 slot."""
    r = CountReport()
    key = {CROSSING: "C1", DOUBLE_SUPPORTING: "T1", ANTIPODAL: "A1", NORMAL_TANGENT: "N1"}
    for e in events:
        if e.kind == CUSP:
            r.U += 1
        elif e.kind == INFLECTION:
            r.I += 1
        else:
            setattr(r, key[e.kind], getattr(r, key[e.kind]) + 1)
    return r


def oracle_report(K: CurveModel, resolution: int | None = None, classify: bool = True,
                  check_doubling: bool = True):
    n = int(resolution or K.config.oracle_resolution)
    sizes = [n, 2 * n] if check_doubling else [n]
    runs = pmap(lambda m: _report(K, m, classify), sizes)
    rep, ev = runs[0]
    if check_doubling:
        rep2 = runs[1][0]
        if rep2.counts() != rep.counts():
            raise ResolutionTooLow(f"counts change between {n} and {2 * n} samples: "
                                   f"{rep.counts()} vs {rep2.counts()}")
    return rep, ev


def kind_totals(r: CountReport) -> dict:
    return {"C": r.C1 + r.C2, "T": r.T1 + r.T2, "A": r.A1 + r.A2, "N": r.N1 + r.N2,
            "I": r.I, "U": r.U}


def _key(e):
    return (e.kind, e.subkind or "")


def match_events(pipeline_events, oracle_events, L: float, tol: float):
    """Pair events of the same kind whose parameters agree within ``tol``.

    Returns ``(matched, only_pipeline, only_oracle)``; matched pairs also
    carry whether the type labels agree.
    """
    def gap(p, q):
        return max(min(abs(x - y) % L, L - abs(x - y) % L) for x, y in zip(p, q))

    def d(a, b):
        if len(a.params) != len(b.params):
            return math.inf
        if a.kind in (CROSSING, DOUBLE_SUPPORTING):
            # unordered pairs; the sorted order flips when a parameter wraps
            return min(gap(a.params, b.params), gap(a.params, b.params[::-1]))
        return gap(a.params, b.params)

    left = [e for e in pipeline_events if e.type_label in (1, 2) or e.kind in (CUSP, INFLECTION)]
    right = [e for e in oracle_events if e.type_label in (1, 2) or e.kind in (CUSP, INFLECTION)]
    used = set()
    matched, only_left = [], []
    for a in left:
        best, bj = math.inf, None
        for j, b in enumerate(right):
            if j in used or _key(a) != _key(b):
                continue
            dist = d(a, b)
            if dist < best:
                best, bj = dist, j
        if bj is not None and best <= tol:
            used.add(bj)
            matched.append((a, right[bj], a.type_label == right[bj].type_label))
        else:
            only_left.append(a)
    only_right = [b for j, b in enumerate(right) if j not in used]
    return matched, only_left, only_right
