"""Counting reports, exact identity residuals, and the M_p / V_p traces.

Residuals are kept as integers counting halves, so ``r1_halves == 1`` means a
residual of 1/2.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from . import ambient as amb
from .curve import CurveModel
from .errors import EventAtParameter, GenericityError, PreconditionViolated, UnclassifiedEvent
from .events import (ANTIPODAL, CROSSING, CUSP, DOUBLE_SUPPORTING, INFLECTION, NORMAL_TANGENT,
                     Event)
from .roots import circ_dist, sign_change_roots

MODES = ("theorem1", "theorem3", "theorem4", "corollary5")
COUNT_FIELDS = ("T1", "T2", "C1", "C2", "I", "U", "A1", "A2", "N1", "N2")


@dataclass
class CountReport:
    T1: int = 0
    T2: int = 0
    C1: int = 0
    C2: int = 0
    I: int = 0
    U: int = 0
    A1: int = 0
    A2: int = 0
    N1: int = 0
    N2: int = 0
    # double supporting geodesics that touch a cusp; they enter T but are
    # left out where the identity is the dual statement
    T1_cusp: int = 0
    T2_cusp: int = 0
    kbar: bool = False
    residuals: dict = field(default_factory=dict)   # mode -> tuple of halves

    def counts(self) -> dict:
        return {k: getattr(self, k) for k in COUNT_FIELDS}

    def same_counts(self, other: "CountReport") -> bool:
        return self.counts() == other.counts()

    def fill_residuals(self) -> "CountReport":
        self.residuals = {}
        for mode in MODES:
            try:
                self.residuals[mode] = evaluate_identities(self, mode)
            except PreconditionViolated:
                pass
        return self

    def residual_strings(self) -> dict:
        return {m: [str(Fraction(h, 2)) for h in v] for m, v in self.residuals.items()}

    def all_zero(self) -> bool:
        return all(h == 0 for v in self.residuals.values() for h in v)

    def to_dict(self) -> dict:
        d = self.counts()
        d["T1_cusp"], d["T2_cusp"] = self.T1_cusp, self.T2_cusp
        d["kbar"] = self.kbar
        d["residuals"] = self.residual_strings()
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "CountReport":
        r = cls(**{k: int(d[k]) for k in COUNT_FIELDS}, kbar=bool(d.get("kbar", False)),
                T1_cusp=int(d.get("T1_cusp", 0)), T2_cusp=int(d.get("T2_cusp", 0)))
        return r.fill_residuals()


def evaluate_identities(r: CountReport, mode: str) -> tuple:
    """Left minus right side of the chosen identity, in halves.

    ``corollary5`` returns both equations ``(4T1 - 4C1) - (N1 - N2)`` and
    ``(4T2 + 4C2) - (N1 - N2)``.
    """
    if mode == "theorem1":
        if r.kbar:
            raise PreconditionViolated("theorem1 is stated for K, not K-bar")
        lhs = 2 * (r.T1 - r.T2)
        rhs = 2 * (r.C1 + r.C2) + r.I + 2 * r.U - r.A1 + r.A2
        return (lhs - rhs,)
    if mode == "theorem3":
        if r.kbar:
            raise PreconditionViolated("theorem3 is stated for K, not K-bar")
        if r.I != 0:
            raise PreconditionViolated("theorem3 requires no inflection points")
        lhs = 2 * (r.C1 - r.C2)
        t = r.T1 + r.T2 - r.T1_cusp - r.T2_cusp
        rhs = 2 * t + r.U - r.N1 + r.N2
        return (lhs - rhs,)
    if mode == "theorem4":
        if not r.kbar:
            raise PreconditionViolated("theorem4 needs K-bar counts")
        lhs = 2 * (r.C1 - r.C2)
        t = r.T1 + r.T2 - r.T1_cusp - r.T2_cusp
        rhs = 2 * t + r.U + 2 * r.I - r.N1 + r.N2
        return (lhs - rhs,)
    if mode == "corollary5":
        if r.kbar:
            raise PreconditionViolated("corollary5 is stated for K")
        if r.U or r.I or r.A1 or r.A2:
            raise PreconditionViolated("corollary5 requires no cusps, inflections or antipodal pairs")
        d = r.N1 - r.N2
        return (2 * (4 * r.T1 - 4 * r.C1 - d), 2 * (4 * r.T2 + 4 * r.C2 - d))
    raise ValueError(f"unknown mode {mode!r}")


_KEY = {
    (CROSSING, 1): "C1", (CROSSING, 2): "C2",
    (DOUBLE_SUPPORTING, 1): "T1", (DOUBLE_SUPPORTING, 2): "T2",
    (ANTIPODAL, 1): "A1", (ANTIPODAL, 2): "A2",
    (NORMAL_TANGENT, 1): "N1", (NORMAL_TANGENT, 2): "N2",
}


def count_report(events, kbar: bool = False) -> CountReport:
    r = CountReport(kbar=kbar)
    for e in events:
        if e.kind == INFLECTION:
            r.I += 1
        elif e.kind == CUSP:
            r.U += 1
        else:
            if e.type_label not in (1, 2):
                raise UnclassifiedEvent(f"{e.kind} at {e.params} has no type label")
            if e.kind == NORMAL_TANGENT and e.subkind in ("cusp", "cusp-tangent"):
                continue    # pairs at a cusp are reported but not counted
            key = _KEY[(e.kind, e.type_label)]
            setattr(r, key, getattr(r, key) + 1)
            if e.kind == DOUBLE_SUPPORTING and "cusp" in (e.roles or ()):
                key += "_cusp"
                setattr(r, key, getattr(r, key) + 1)
    return r.fill_residuals()


# ---------------------------------------------------------------- traces

@dataclass
class TraceSample:
    t: float
    Mp_plus: int = 0
    Mp_minus: int = 0
    Wp: int = 0
    Bp: int = 0
    jumps: list = field(default_factory=list)

    @property
    def Mp(self) -> int:
        return self.Mp_plus - self.Mp_minus

    @property
    def Vp(self) -> int:
        return self.Wp - self.Bp


def _cusp_weight(K: CurveModel):
    cs = np.sort(np.asarray(K.cusps, dtype=float))

    def sgn(t):
        return (-1.0) ** np.searchsorted(cs, np.atleast_1d(t) % K.L)

    return sgn


def _trace_n(K):
    return 16 * K.config.grid


def trace_Mp(K: CurveModel, t: float, n: int | None = None) -> TraceSample:
    """Signed count of intersections of K with the tangent geodesic at t.

    Intersections on the half from p to a_p (in the direction of motion)
    count +1, those on the other half -1.
    """
    if K.near_cusp(t):
        raise EventAtParameter(f"t={t:.9g} is at a cusp")
    loc = K.local([t])
    p, T, N = loc.p[0], loc.T[0], loc.N[0]

    def g(u):
        return K.ambient.derivs(u, 0)[0] @ N

    roots = sign_change_roots(g, K.L, n or _trace_n(K), closure=K.sigma)
    out = TraceSample(float(t))
    for u in roots:
        if circ_dist(u, t, K.L) < 1e-7 * K.L:
            continue
        r = K.point([u])[0]
        theta = math.atan2(float(r @ T), float(r @ p)) % math.pi
        if abs(theta - math.pi / 2) < 1e-9:
            raise EventAtParameter(f"intersection at the antipodal point for t={t:.9g}")
        if theta < math.pi / 2:
            out.Mp_plus += 1
        else:
            out.Mp_minus += 1
    return out


def trace_Vp(K: CurveModel, t: float, n: int | None = None, tol_axis: float = 1e-9) -> TraceSample:
    """White-minus-black count of tangent geodesics of K through gamma(t)."""
    if K.near_cusp(t):
        raise EventAtParameter(f"t={t:.9g} is at a cusp")
    loc = K.local([t])
    p, T, n_ = loc.p[0], loc.T[0], loc.n[0]
    if not np.all(np.isfinite(n_)) or loc.det[0] == 0:
        raise EventAtParameter(f"frame undefined at t={t:.9g}")
    D = amb.dual_of(K.ambient)
    w = _cusp_weight(K)

    def h(u):
        return (D.derivs(u, 0)[0] @ p) * w(u)

    closure = (-1.0) ** len(K.cusps)
    roots = sign_change_roots(h, K.L, n or _trace_n(K), closure=closure)
    out = TraceSample(float(t))
    for u in roots:
        if circ_dist(u, t, K.L) < 1e-7 * K.L:
            continue
        Nu = K.local([u]).N[0]
        d = np.cross(Nu, p)
        x, y = float(d @ T), float(d @ n_)
        if min(abs(x), abs(y)) < tol_axis * np.linalg.norm(d):
            raise GenericityError("direction_on_axis", f"t={t:.9g}, u={u:.9g}")
        if x * y > 0:
            out.Wp += 1
        else:
            out.Bp += 1
    return out


def _event_params(events, K, which):
    pts = []
    for e in events:
        for i, s in enumerate(e.params):
            pts.append((float(s) % K.L, e, i))
    return sorted(pts, key=lambda x: x[0])


def trace_ledger(K: CurveModel, events, quantity: str = "Mp", probes: int = 3, n: int | None = None):
    """Sample the trace between consecutive event parameters and attribute jumps.

    Returns ``(samples, ledger, unattributed)``: ``samples`` lists
    (t, value) pairs; ``ledger`` holds one entry per event parameter with the
    jump across it; ``unattributed`` lists intervals on which the trace was not
    constant (a missed event).
    """
    fn = trace_Mp if quantity == "Mp" else trace_Vp
    val = (lambda s: s.Mp) if quantity == "Mp" else (lambda s: s.Vp)
    pts = _event_params(events, K, quantity)
    # merge parameters that coincide numerically
    groups = []
    for s, e, i in pts:
        if groups and circ_dist(s, groups[-1][0], K.L) < 1e-9 * K.L:
            groups[-1][1].append((e, i))
        else:
            groups.append([s, [(e, i)]])
    if len(groups) >= 2 and circ_dist(groups[0][0], groups[-1][0], K.L) < 1e-9 * K.L:
        groups[0][1].extend(groups.pop()[1])
    if not groups:
        groups = [[0.0, []]]
    cuts = [g[0] for g in groups]
    values = []
    unattributed = []
    samples = []
    for k in range(len(cuts)):
        a = cuts[k]
        b = cuts[k + 1] if k + 1 < len(cuts) else cuts[0] + K.L
        if b - a < 1e-12 * K.L and len(cuts) > 1:
            values.append(None)
            continue
        vs = []
        lo, hi = a, b
        # keep probes out of the windows around cusps at either end
        if K.near_cusp(a % K.L) and b - a > 3 * K.delta_cusp:
            lo = a + 1.5 * K.delta_cusp
        if K.near_cusp(b % K.L) and hi - lo > 3 * K.delta_cusp:
            hi = b - 1.5 * K.delta_cusp
        for j in range(1, probes + 1):
            tt = (lo + (hi - lo) * j / (probes + 1)) % K.L
            if K.near_cusp(tt):
                continue
            vs.append(val(fn(K, tt, n)))
            samples.append((tt, vs[-1]))
        if not vs:
            values.append(None)
            continue
        if len(set(vs)) != 1:
            unattributed.append({"interval": [a, b], "values": vs})
        values.append(vs[len(vs) // 2])
    ledger = []
    for k, (s, refs) in enumerate(groups):
        before = values[k - 1]
        after = values[k]
        ledger.append({"t": s, "events": refs,
                       "jump": None if before is None or after is None else after - before})
    return samples, ledger, unattributed


def ledger_totals(ledger) -> dict:
    """Sum of jumps keyed by (kind, subkind, type, role index) of the single attributed event."""
    tot = {}
    for entry in ledger:
        if entry["jump"] is None or len(entry["events"]) != 1:
            continue
        e, i = entry["events"][0]
        key = (e.kind, e.subkind, e.type_label, i)
        tot[key] = tot.get(key, 0) + entry["jump"]
    return tot


# Per-event contributions to V_p, summed over the event's parameters.
VP_TABLE = {("C", 1): 4, ("C", 2): -4, ("T", 1): -4, ("T", 2): -4, ("U", None): -2,
            ("N", 1): 2, ("N", 2): -2}


def expected_jump(e: Event, role: int, quantity: str):
    """Jump of the trace when t passes parameter ``role`` of event ``e``; None if not tabulated."""
    lab = e.type_label
    if quantity == "Mp":
        if e.kind == CROSSING:
            return -2
        if e.kind == DOUBLE_SUPPORTING:
            return 2 if lab == 1 else -2
        if e.kind == INFLECTION:
            return -2
        if e.kind == CUSP:
            return -4
        if e.kind == ANTIPODAL:
            return (2 if lab == 1 else -2) if role == 0 else 0
        if e.kind == NORMAL_TANGENT:
            return 0
    else:
        if e.kind == CROSSING:
            return VP_TABLE[("C", lab)] // 2
        if e.kind == DOUBLE_SUPPORTING:
            # only tangent-tangent geodesics move V_p
            return 0 if "cusp" in (e.roles or ()) else VP_TABLE[("T", lab)] // 2
        if e.kind == CUSP:
            return VP_TABLE[("U", None)]
        if e.kind == NORMAL_TANGENT:
            return VP_TABLE[("N", lab)] if role == 0 else 0
        if e.kind == ANTIPODAL:
            return 0
        # at an inflection the frame colouring flips, so the jump depends on
        # the value of V_p itself; the table is for curves without inflections
    return None


def ledger_mismatches(ledger, quantity: str):
    """Ledger entries whose jump differs from the sum of tabulated contributions."""
    bad = []
    for entry in ledger:
        if entry["jump"] is None:
            continue
        exp = [expected_jump(e, i, quantity) for e, i in entry["events"]]
        if any(x is None for x in exp):
            bad.append({**entry, "expected": None})
        elif sum(exp) != entry["jump"]:
            bad.append({**entry, "expected": sum(exp)})
    return bad
