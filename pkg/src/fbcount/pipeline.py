"""End-to-end analysis of one curve: detect, classify, count."""
from __future__ import annotations

from dataclasses import dataclass, field

from . import classify as cl
from . import events as ev
from .curve import CurveModel
from .errors import FBError, GenericityError
from .genericity import check_genericity, dedupe
from .identities import CountReport, count_report


@dataclass
class Analysis:
    curve: CurveModel
    events: list
    report: CountReport
    diagnostics: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    @property
    def generic(self) -> bool:
        return not self.violations

    def by_kind(self, kind, subkind=None):
        return [e for e in self.events if e.kind == kind and (subkind is None or e.subkind == subkind)]


def detect(K: CurveModel, grid=None, diagnostics=None, cusp_antipodal=True, cusp_normal=False):
    """All singular events of K, unlabeled except cusps."""
    cusps = ev.find_cusps(K)
    cparams = [e.params[0] for e in cusps]
    if list(K.cusps) != cparams:
        K = K.with_cusps(cparams)
    infl = ev.find_inflections(K)
    iparams = [e.params[0] for e in infl]
    out = list(cusps) + list(infl)
    out += ev.find_crossings(K, grid=grid, diagnostics=diagnostics)
    out += ev.find_double_supporting(K, cparams, iparams, grid=grid, diagnostics=diagnostics)
    out += ev.find_antipodal_pairs(K, cparams, grid=grid, diagnostics=diagnostics, at_cusps=cusp_antipodal)
    out += ev.find_normal_tangent_pairs(K, cparams, iparams, grid=grid, diagnostics=diagnostics,
                                        at_cusps=cusp_normal)
    return K, out


def classify_all(K: CurveModel, events, violations=None):
    out = []
    for e in events:
        try:
            out.append(cl.classify(K, e))
        except GenericityError as exc:
            if violations is None:
                raise
            violations.append({"code": exc.code, "kind": e.kind, "params": list(e.params),
                               "message": str(exc)})
            out.append(e.flagged(exc.code))
        except FBError as exc:
            if violations is None:
                raise
            violations.append({"code": type(exc).__name__, "kind": e.kind, "params": list(e.params),
                               "message": str(exc)})
            out.append(e.flagged(type(exc).__name__))
    return out


def analyze(K: CurveModel, grid=None, strict=False, check=True, kbar=False, **opts) -> Analysis:
    """Run detection and classification and assemble the counts.

    With ``strict`` the first genericity problem raises; otherwise problems are
    collected into ``violations`` and unlabeled events are left out of the counts.
    With ``kbar`` the inflection geodesics are added and the report is for K-bar.
    """
    diagnostics: list = []
    violations = None if strict else []
    K, events = detect(K, grid=grid, diagnostics=diagnostics, **opts)
    events = ev.sort_events(classify_all(K, events, violations))
    violations = violations or []
    if check:
        violations = dedupe(violations + check_genericity(K, events, diagnostics))
    if kbar:
        from .kbar import build_kbar, kbar_events
        A = build_kbar(K, [e.params[0] for e in events if e.kind == ev.INFLECTION])
        extra: list = []
        events = events + kbar_events(A, extra)
        violations = dedupe(violations + extra)
    counted = [e for e in events if e.kind in (ev.CUSP, ev.INFLECTION) or e.type_label in (1, 2)]
    report = count_report(counted, kbar=kbar)
    return Analysis(K, events, report, diagnostics, violations)
