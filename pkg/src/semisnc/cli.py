"""Command line front end: ``semisnc <subcommand> ...``.

Exit codes: 0 success, 1 usage or parse error, 2 out-of-class diagnostic,
3 cap exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .algebra import AlgebraError, CapExceeded, Ideal, ParseError, format_rational, ideal_quotient, parse_poly_list
from .blowup import AdmissibilityError, CenterSpec, transform_scene
from .detector import OUT_OF_CLASS, is_semisnc_at
from .driver import CAP_EXCEEDED, Limits, resolve
from .scene import Scene, SceneError, probe_points, scene_warnings, validate_scene
from .staircase import format_tail, hilbert_function, standard_basis_local

REPORT_VERSION = 1
EXIT_OK, EXIT_USAGE, EXIT_DIAGNOSTIC, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--trace", action="store_true", help="include per-phase measures")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="semisnc", description="Semi-snc detection and resolution for normal-form scenes.")
    parser.add_argument("--version", action="version", version=f"semisnc {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("analyze", help="verdicts at every probe point")
    p.add_argument("scene")
    p.add_argument("--probe", action="append", default=[], help="comma separated point (repeatable)")
    _common(p)

    p = sub.add_parser("resolve", help="run the resolution driver")
    p.add_argument("scene")
    p.add_argument("--max-steps", type=int, default=256)
    p.add_argument("--max-depth", type=int, default=32)
    _common(p)

    for name, text in (("hilbert", "Hilbert-Samuel function at a point"),
                       ("diagram", "standard basis and staircase at a point")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--ideal", required=True)
        p.add_argument("--coords", help="comma separated chart (default: variables of the ideal)")
        p.add_argument("--at", default="origin")
        p.add_argument("--upto", type=int, default=8)
        _common(p)

    p = sub.add_parser("quotient", help="ideal quotient I : J")
    p.add_argument("--ideal", required=True)
    p.add_argument("--by", required=True)
    p.add_argument("--coords")
    _common(p)

    p = sub.add_parser("blowup", help="one blow-up of a scene")
    p.add_argument("scene")
    p.add_argument("--center", required=True, help="comma separated center coordinates")
    _common(p)
    return parser


# ------------------------------------------------------------------ input

def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _read_scene(path: str) -> tuple[Scene, bytes]:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from None
    try:
        s = Scene.loads(raw.decode("utf-8"))
    except ParseError as exc:
        raise UsageError(f"{path}:{exc.line}:{exc.column}: {exc.message}") from None
    except (SceneError, UnicodeDecodeError) as exc:
        raise UsageError(f"{path}: {exc}") from None
    errors = validate_scene(s)
    if errors:
        raise UsageError(f"{path}: " + "; ".join(errors))
    return s, raw


def _chart_for(texts: Sequence[str], coords: str | None) -> tuple[str, ...]:
    if coords:
        names = tuple(c.strip() for c in coords.split(",") if c.strip())
        if len(set(names)) != len(names):
            raise UsageError("repeated coordinate in --coords")
        return names
    seen: list[str] = []
    for text in texts:
        for tok in "".join(ch if ch.isalnum() or ch == "_" else " " for ch in text).split():
            if not tok[0].isdigit() and tok not in seen:
                seen.append(tok)
    if not seen:
        raise UsageError("cannot infer a chart; pass --coords")
    return tuple(seen)


def _ideal(text: str, chart, flag: str) -> Ideal:
    try:
        return Ideal(chart, parse_poly_list(text, chart))
    except ParseError as exc:
        raise UsageError(f"{flag}:{exc.line}:{exc.column}: {exc.message}") from None


def _point(text: str, n: int) -> tuple[Fraction, ...]:
    if text.strip() == "origin":
        return (Fraction(0),) * n
    try:
        pt = tuple(Fraction(v.strip()) for v in text.split(","))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad point {text!r}") from None
    if len(pt) != n:
        raise UsageError(f"point {text!r} has {len(pt)} coordinates, expected {n}")
    return pt


def _fmt_pt(a) -> str:
    return "(" + ", ".join(format_rational(v) for v in a) + ")"


# ------------------------------------------------------------------ commands

def _analyze(args) -> tuple[dict, list[str], int]:
    s, raw = _read_scene(args.scene)
    pts = [_point(t, s.n) for t in args.probe] if args.probe else sorted(set(probe_points(s)) | set(s.probes))
    for a in pts:
        if not s.on_X(a):
            raise UsageError(f"probe {_fmt_pt(a)} is not on X")
    verdicts = [is_semisnc_at(s, a) for a in pts]
    body = {"input_digest": _digest(raw), "warnings": scene_warnings(s),
            "verdicts": [v.to_json() for v in verdicts]}
    lines = [f"input {body['input_digest']}"]
    lines += [f"warning {w}" for w in body["warnings"]]
    for v in verdicts:
        line = f"{_fmt_pt(v.point)} {v.answer} stratum {v.stratum}"
        if v.failed_condition:
            line += f" failed {v.failed_condition}"
        if v.witness:
            line += " witness " + json.dumps(v.witness)
        lines.append(line)
    code = EXIT_CAP if any(v.answer == OUT_OF_CLASS for v in verdicts) else EXIT_OK
    return body, lines, code


def _node_lines(node, trace: bool, indent: int = 0) -> list[str]:
    pad = "  " * indent
    ok = sum(v.ok for v in node.verdicts)
    line = f"{pad}{node.path}: {ok}/{len(node.verdicts)} probes semi-snc"
    if node.center is not None:
        line += f"; blow up {node.center} [{node.phase}]"
    out = [line]
    if trace and node.center is not None:
        out.append(f"{pad}  measures {json.dumps(node.measures)}")
    if node.diagnostic is not None:
        d = node.diagnostic
        out.append(f"{pad}  diagnostic {d.reason} ({d.phase}) at {d.location}: {d.message}")
    for m, child in node.children:
        out.append(f"{pad}  chart {m.chart_coord}: " + ", ".join(f"{k} -> {v}" for k, v in m.substitution))
        out.extend(_node_lines(child, trace, indent + 1))
    return out


def _resolve(args) -> tuple[dict, list[str], int]:
    s, raw = _read_scene(args.scene)
    if args.max_steps < 0 or args.max_depth < 0:
        raise UsageError("limits must be non-negative")
    root, cert = resolve(s, Limits(max_blowups=args.max_steps, max_depth=args.max_depth))
    body = {"input_digest": _digest(raw), "certification": cert.to_json(), "tree": root.to_json()}
    lines = [f"input {body['input_digest']}"] + _node_lines(root, args.trace)
    lines.append(f"blowups {cert.blowups} leaves {cert.leaves} depth {cert.depth} "
                 f"certified {'yes' if cert.certified else 'no'}")
    if cert.diagnostic is None:
        code = EXIT_OK if cert.certified else EXIT_DIAGNOSTIC
    else:
        code = EXIT_CAP if cert.diagnostic.reason == CAP_EXCEEDED else EXIT_DIAGNOSTIC
    return body, lines, code


def _hilbert(args, with_basis: bool) -> tuple[dict, list[str], int]:
    chart = _chart_for([args.ideal], args.coords)
    I = _ideal(args.ideal, chart, "--ideal")
    a = _point(args.at, len(chart))
    basis, st = standard_basis_local(I, a)
    H = hilbert_function(st)
    body = {"input_digest": _digest(json.dumps([args.ideal, list(chart), args.at]).encode()),
            "coords": list(chart), "at": [format_rational(v) for v in a],
            "staircase": st.dump(chart),
            "values": H.values(args.upto),
            "tail_start": H.tail_start,
            "tail": format_tail(H.tail)}
    if with_basis:
        body["standard_basis"] = [str(g) for g in basis.gens]
    lines = [f"coords {', '.join(chart)}", f"at {_fmt_pt(a)}"]
    if with_basis:
        lines.append("standard basis " + ", ".join(body["standard_basis"]))
    lines.append("staircase " + ", ".join(body["staircase"]))
    lines += H.dump(args.upto)
    return body, lines, EXIT_OK


def _quotient(args) -> tuple[dict, list[str], int]:
    chart = _chart_for([args.ideal, args.by], args.coords)
    I = _ideal(args.ideal, chart, "--ideal")
    J = _ideal(args.by, chart, "--by")
    Q = ideal_quotient(I, J)
    body = {"input_digest": _digest(json.dumps([args.ideal, args.by, list(chart)]).encode()),
            "coords": list(chart), "quotient": [str(g) for g in Q.gens]}
    return body, [f"{I} : {J} = {Q}"], EXIT_OK


def _blowup(args) -> tuple[dict, list[str], int]:
    s, raw = _read_scene(args.scene)
    names = [c.strip() for c in args.center.split(",") if c.strip()]
    try:
        center = CenterSpec.of(s.coords, names)
    except (ValueError, AlgebraError) as exc:
        raise UsageError(f"--center: {exc}") from None
    if not s.probes:
        s = Scene(s.coords, s.X, s.D, s.E, tuple(probe_points(s)))
    try:
        charts = transform_scene(s, center)
    except AdmissibilityError as exc:
        raise UsageError(str(exc)) from None
    body = {"input_digest": _digest(raw), "center": list(center.coords),
            "charts": [{"map": m.to_json(), "scene": c.to_json()} for m, c in charts]}
    lines = [f"input {body['input_digest']}", f"center {center}"]
    for m, c in charts:
        lines.append(f"chart {m.chart_coord}: " + ", ".join(f"{k} -> {v}" for k, v in m.substitution))
        lines.append(f"  X {', '.join(c.X) or '-'}")
        for comp in c.D:
            lines.append(f"  D mult {format_rational(comp.mult)} on {comp.host}: "
                         + ", ".join(str(f) for f in comp.factors))
        lines.append(f"  E {', '.join(e.name for e in c.E)}")
    return body, lines, EXIT_OK


COMMANDS = {
    "analyze": _analyze,
    "resolve": _resolve,
    "hilbert": lambda a: _hilbert(a, False),
    "diagram": lambda a: _hilbert(a, True),
    "quotient": _quotient,
    "blowup": _blowup,
}


def render(command: str, body: dict, lines: list[str], code: int, fmt: str) -> str:
    if fmt == "json":
        report = {"report_version": REPORT_VERSION, "subcommand": command}
        report.update(body)
        report["exit_status"] = code
        return json.dumps(report, indent=2) + "\n"
    return "\n".join(lines) + "\n"


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand")
        body, lines, code = COMMANDS[args.command](args)
    except UsageError as exc:
        err.write(f"semisnc: error: {exc}\n")
        return EXIT_USAGE
    except CapExceeded as exc:
        err.write(f"semisnc: cap exceeded: {exc}\n")
        return EXIT_CAP
    out.write(render(args.command, body, lines, code, args.format))
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
