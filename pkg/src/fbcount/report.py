"""Report JSON: counts, residuals, the event table, trace ledgers and a render sample."""
from __future__ import annotations

import json
import math

import numpy as np

from . import __version__
from .curve import CurveModel
from .errors import FBError, GenericityError
from .events import Event
from .identities import (CountReport, ledger_mismatches, trace_ledger)
from .parallel import pmap
from .projective import canonical

RENDER_SAMPLES = 1440


def _r(x, nd=12):
    """Round for output; keeps JSON stable across platforms."""
    return float(round(float(x), nd))


def curve_block(K: CurveModel) -> dict:
    return {"name": K.name, "source": K.source, "L": _r(K.L), "sigma": int(K.sigma),
            "cusps": [_r(u) for u in K.cusps]}


def render_samples(K: CurveModel, n: int = RENDER_SAMPLES) -> list:
    t = np.arange(n) * (K.L / n)
    P = K.point(t)
    return [[_r(c, 9) for c in p] for p in P]


def _event_dict(e: Event) -> dict:
    d = e.to_dict()
    d["params"] = [_r(x) for x in d["params"]]
    d["location"] = [[_r(c) for c in canonical(np.asarray(p))] for p in d["location"]]
    if "pole" in d:
        d["pole"] = [_r(c) for c in d["pole"]]
    return d


def ledger_block(K: CurveModel, events, quantity: str, index: dict) -> dict:
    """Trace samples and jumps for one quantity, with jumps attributed by event index."""
    try:
        samples, ledger, unattributed = trace_ledger(K, events, quantity)
    except (GenericityError, FBError) as exc:
        return {"error": {"code": getattr(exc, "code", type(exc).__name__), "message": str(exc)}}
    entries = []
    mismatches = 0
    for entry in ledger:
        ok = not ledger_mismatches([entry], quantity)
        mismatches += not ok
        entries.append({
            "t": _r(entry["t"]),
            "events": [{"index": index[id(e)], "kind": e.kind, "type": e.type_label, "role": i}
                       for e, i in entry["events"]],
            "jump": entry["jump"],
            "matches_table": ok,
        })
    jumps = [e["jump"] for e in ledger if e["jump"] is not None]
    return {"samples": [[_r(t), int(v)] for t, v in samples], "jumps": entries,
            "net_change": int(sum(jumps)), "unattributed": unattributed,
            "mismatches": mismatches}


def build_report(analysis, ledgers: bool = True, config=None) -> dict:
    """Report dict for an ``Analysis``; deterministic for a fixed input and config."""
    K = analysis.curve
    rep: CountReport = analysis.report
    rep.fill_residuals()
    events = analysis.events
    index = {id(e): k for k, e in enumerate(events)}
    out = {
        "fbcount_version": __version__,
        "curve": curve_block(K),
        "kbar": bool(rep.kbar),
        "counts": rep.counts(),
        "cusp_supporting": {"T1": rep.T1_cusp, "T2": rep.T2_cusp},
        "residuals": rep.residual_strings(),
        "generic": analysis.generic,
        "violations": analysis.violations,
        "events": [_event_dict(e) for e in events],
    }
    if ledgers:
        base = [e for e in events if e.subkind not in ("curve-geodesic", "geodesic-geodesic", "geodesic")
                and (e.type_label in (1, 2) or e.kind in ("Cusp", "Inflection"))]
        blocks = pmap(lambda q: ledger_block(K, base, q, index), ("Mp", "Vp"))
        out["trace_ledger"] = {"Mp": blocks[0], "Vp": blocks[1]}
        out["trace_ledger"]["Vp"]["table_applies"] = rep.I == 0
    out["render"] = {"samples": render_samples(K)}
    if config is not None:
        out["config"] = config.to_dict()
    return _clean(out)


def _clean(x):
    """Replace numpy scalars and non-finite floats so the dict is plain JSON."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def exit_status(report: dict) -> int:
    """0 = generic and all residuals zero, 2 = a nonzero residual, 3 = non-generic."""
    if not report.get("generic", True) or report.get("violations"):
        return 3
    for vals in report.get("residuals", {}).values():
        if any(v != "0" for v in vals):
            return 2
    return 0
