"""Command-line front end.

Exit status: 0 when the input is generic and every applicable residual is
zero, 1 for a malformed spec or config, 2 for a nonzero residual and 3 for a
non-generic input.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from .config import Config
from .curve import load_spec, spec_of
from .errors import FBError, ResolutionTooLow, SpecError

EXIT_OK, EXIT_SPEC, EXIT_RESIDUAL, EXIT_NONGENERIC = 0, 1, 2, 3


def _defaults_text() -> str:
    lines = ["config keys and defaults (pass a JSON object with --config, or a",
             "\"config\" block inside the spec file):"]
    for k, v in Config().to_dict().items():
        lines.append(f"  {k} = {v}")
    lines += ["", "exit status: 0 ok, 1 malformed spec or config, 2 nonzero residual,",
              "3 non-generic input", "", "--threads falls back to the FBCOUNT_THREADS environment variable."]
    return "\n".join(lines)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None, metavar="N",
                        help="cap on worker threads (default: FBCOUNT_THREADS or the CPU count)")
    common.add_argument("--config", default=None, metavar="JSON",
                        help="config overrides: a JSON file or an inline JSON object")

    fmt = argparse.RawDescriptionHelpFormatter
    p = argparse.ArgumentParser(prog="fbcount", description="Count and classify singularities of "
                                "closed curves in the projective plane.", epilog=_defaults_text(),
                                formatter_class=fmt)
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="full pipeline, report JSON and SVG",
                       epilog=_defaults_text(), formatter_class=fmt)
    a.add_argument("spec")
    a.add_argument("--json", metavar="OUT", help="write the report here (default: stdout)")
    a.add_argument("--svg", metavar="OUT", help="also render the disk model")
    a.add_argument("--kbar", action="store_true", help="add the inflection geodesics (K-bar counts)")
    a.add_argument("--no-ledger", action="store_true", help="skip the trace-jump ledgers")

    r = sub.add_parser("render", parents=[common], help="render an existing report as SVG")
    r.add_argument("report")
    r.add_argument("--svg", metavar="OUT", required=True)

    d = sub.add_parser("dual", parents=[common], help="emit a spec file for the dual curve")
    d.add_argument("spec")
    d.add_argument("-o", "--output", metavar="OUT", help="default: stdout")

    t = sub.add_parser("trace", parents=[common], help="M_p or V_p as a CSV step function")
    t.add_argument("spec")
    t.add_argument("--quantity", choices=("Mp", "Vp"), default="Mp")
    t.add_argument("--samples", type=int, default=512)
    t.add_argument("-o", "--output", metavar="OUT", help="default: stdout")

    o = sub.add_parser("oracle", parents=[common], help="brute-force counts from a dense polyline")
    o.add_argument("spec")
    o.add_argument("--resolution", type=int, default=None)
    o.add_argument("--no-doubling", action="store_true",
                   help="skip the stability check at twice the resolution")
    o.add_argument("--json", metavar="OUT")

    c = sub.add_parser("check", parents=[common], help="genericity checks only")
    c.add_argument("spec")
    c.add_argument("--json", metavar="OUT")
    return p


def _config(arg, spec_block) -> Config:
    d = dict(spec_block or {})
    if arg:
        path = Path(arg)
        text = path.read_text() if path.exists() else arg
        try:
            over = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SpecError("config", f"invalid JSON: {exc}") from None
        if not isinstance(over, dict):
            raise SpecError("config", "must be a JSON object")
        d.update(over)
    try:
        return Config.from_dict(d)
    except (KeyError, TypeError) as exc:
        raise SpecError("config", str(exc).strip("'\"")) from None


def _load(args):
    path = Path(args.spec)
    if not path.exists():
        raise SpecError("<file>", f"no such file: {path}")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise SpecError("<file>", f"invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise SpecError("<root>", "spec must be a JSON object")
    cfg = _config(args.config, raw.get("config"))
    spec = {k: v for k, v in raw.items() if k != "config"}
    try:
        return load_spec(spec, cfg), cfg
    except SpecError:
        raise
    except (ValueError, TypeError) as exc:
        raise SpecError("samples" if "samples" in spec else "builtin.params", str(exc)) from None


def _emit(text: str, out):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    from .pipeline import analyze
    from .render import render_svg
    from .report import build_report, dumps, exit_status
    K, cfg = _load(args)
    rep = build_report(analyze(K, kbar=args.kbar), ledgers=not args.no_ledger, config=cfg)
    _emit(dumps(rep), args.json)
    if args.svg:
        Path(args.svg).write_text(render_svg(rep))
    return exit_status(rep)


def cmd_render(args) -> int:
    from .render import render_svg
    try:
        rep = json.loads(Path(args.report).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise SpecError("<report>", str(exc)) from None
    Path(args.svg).write_text(render_svg(rep))
    return EXIT_OK


def cmd_dual(args) -> int:
    K, _ = _load(args)
    spec = {"kind": "spherical", "name": (K.name or "curve") + "'",
            "builtin": {"name": "dual", "params": {"of": spec_of(K)}}}
    _emit(json.dumps(spec, indent=2, sort_keys=True) + "\n", args.output)
    return EXIT_OK


def cmd_trace(args) -> int:
    from .identities import trace_Mp, trace_Vp
    from .pipeline import detect
    K, _ = _load(args)
    if args.samples < 1:
        raise SpecError("--samples", "must be positive")
    K, _ = detect(K)
    fn = trace_Mp if args.quantity == "Mp" else trace_Vp
    cols = ("Mp_plus", "Mp_minus", "Mp") if args.quantity == "Mp" else ("Wp", "Bp", "Vp")
    rows = []
    for t in np.arange(args.samples) * (K.L / args.samples):
        try:
            s = fn(K, float(t))
            rows.append([f"{t:.12g}"] + [getattr(s, c) for c in cols])
        except FBError:
            # undefined at this parameter (an event sits here): leave blank
            rows.append([f"{t:.12g}", "", "", ""])
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(("t",) + cols)
        w.writerows(rows)
    finally:
        if args.output:
            out.close()
    return EXIT_OK


def cmd_oracle(args) -> int:
    from .oracle import oracle_report
    from .report import dumps
    K, cfg = _load(args)
    try:
        rep, ev = oracle_report(K, args.resolution or cfg.oracle_resolution,
                                check_doubling=not args.no_doubling)
    except ResolutionTooLow as exc:
        print(f"fbcount: {exc}", file=sys.stderr)
        return EXIT_NONGENERIC
    rep.fill_residuals()
    unlabeled = [e for e in ev if e.kind not in ("Cusp", "Inflection") and e.type_label is None]
    out = {"counts": rep.counts(), "residuals": rep.residual_strings(),
           "resolution": int(args.resolution or cfg.oracle_resolution),
           "unclassified": [e.to_dict() for e in unlabeled]}
    _emit(dumps(out), args.json)
    if unlabeled:
        return EXIT_NONGENERIC
    return EXIT_OK if rep.all_zero() else EXIT_RESIDUAL


def cmd_check(args) -> int:
    from .pipeline import analyze
    from .report import dumps
    K, _ = _load(args)
    a = analyze(K)
    _emit(dumps({"generic": a.generic, "violations": a.violations}), args.json)
    return EXIT_OK if a.generic else EXIT_NONGENERIC


COMMANDS = {"analyze": cmd_analyze, "render": cmd_render, "dual": cmd_dual, "trace": cmd_trace,
            "oracle": cmd_oracle, "check": cmd_check}


def main(argv=None) -> int:
    from .parallel import set_threads
    args = _parser().parse_args(argv)
    try:
        if args.threads is not None:
            if args.threads < 1:
                raise SpecError("--threads", "must be positive")
            set_threads(args.threads)
        return COMMANDS[args.command](args)
    except SpecError as exc:
        print(f"fbcount: malformed input, field {exc.field!r}: {exc.message}", file=sys.stderr)
        return EXIT_SPEC
    except ValueError as exc:
        print(f"fbcount: {exc}", file=sys.stderr)
        return EXIT_SPEC
    finally:
        set_threads(None)


if __name__ == "__main__":
    sys.exit(main())
