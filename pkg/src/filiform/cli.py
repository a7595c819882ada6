"""Command-line front end.

Exit codes: 0 all requested checks pass, 2 a mathematical check failed,
1 usage or I/O error.  JSON output is deterministic for a fixed version.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence

from . import __version__
from .exactalg import T, const, parse, to_rational
from .isokit import STAGES, export_equations
from .liecore import BilinearMap
from .vergne import FiliformPoint, LengthMismatch, generic_filiform, specialize

log = logging.getLogger("filiform")

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2
FORMATS = ("json", "latex", "text")


class UsageError(Exception):
    def __init__(self, message: str, code: str = "E-USAGE"):
        super().__init__(message)
        self.code = code


class UnsupportedFormat(UsageError):
    def __init__(self, fmt: str, what: str):
        super().__init__(f"format {fmt!r} is not available for {what}", "E-FORMAT")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _digest(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":")).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()


def _envelope(command: str, inputs: dict, result, timings: Optional[dict] = None) -> dict:
    doc = {"tool": "filiform", "version": __version__, "command": command,
           "inputs": inputs, "input_digest": _digest(inputs), "result": result}
    if timings is not None:
        doc["timings"] = timings
    return doc


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False)


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}", "E-IO")
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}", "E-IO")


def _load_point(path: str) -> FiliformPoint:
    data = _read_json(path)
    try:
        return FiliformPoint.from_dict(data)
    except LengthMismatch as exc:
        raise UsageError(f"LengthMismatch: {exc}", "E-LENGTH")
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"malformed point file {path}: {exc}", "E-IO")


def _rational(text: str):
    try:
        return to_rational(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}")


def _check_n(n: int, lo: int = 3, hi: int = 13) -> int:
    if not lo <= n <= hi:
        raise UsageError(f"n must lie in [{lo}, {hi}], got {n}", "E-DIM")
    return n


# ---------------------------------------------------------------------------
# rendering


def _vector_latex(vec) -> str:
    parts = []
    for k, c in sorted(vec.items()):
        body = c.latex()
        if len(c) > 1:
            coef = f"({body}) "
        elif body == "1":
            coef = ""
        elif body == "-1":
            coef = "-"
        else:
            coef = body + " "
        parts.append(f"{coef}x_{{{k}}}")
    out = " + ".join(parts)
    return out.replace("+ -", "- ")


def _vector_text(vec) -> str:
    parts = []
    for k, c in sorted(vec.items()):
        parts.append(f"({c})*x{k}" if len(c) > 1 else f"{c}*x{k}")
    return " + ".join(parts)


def brackets_document(mu: BilinearMap, fmt: str, skip_x0: bool = True) -> str:
    """Bracket table mu(x_i, x_j), i < j, one row per nonzero pair."""
    n = mu.dim
    rows = [(i, j, mu.bracket(i, j)) for i in range(n) for j in range(i + 1, n)]
    rows = [(i, j, v) for i, j, v in rows if v and not (skip_x0 and i == 0)]
    if fmt == "json":
        return _dump(mu.to_dict())
    if fmt == "text":
        return "\n".join(f"mu(x{i}, x{j}) = {_vector_text(v)}" for i, j, v in rows) + "\n"
    lines = [r"\begin{eqnarray*}"]
    body = [rf"\mu(x_{{{i}}}, x_{{{j}}}) &=& {_vector_latex(v)}" for i, j, v in rows]
    lines.append(" \\\\\n".join(body))
    lines.append(r"\end{eqnarray*}")
    return "\n".join(lines) + "\n"


def equations_document(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return _dump(doc)
    lines = []
    if doc.get("warning"):
        lines.append(f"# WARNING: {doc['warning']}")
    if fmt == "text":
        lines.append(f"# n={doc['n']} stage={doc['stage']} direction={doc['direction']} t={doc['t']}")
        lines += [f"{e['label']} = {e['poly']}" for e in doc["equations"]]
        return "\n".join(lines) + "\n"
    if lines:
        lines = ["% " + lines[0][2:]]
    for e in doc["equations"]:
        lines.append(rf"E_{{{e['i']},{e['j']}}}^{{{e['k']}}} = {parse(e['poly']).latex()} \\")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# verification jobs (module level so they can be shipped to worker processes)


def _run_scripts_for(n: int, names: Sequence[str]) -> List[dict]:
    from .scripts import default_runner
    runner = default_runner()
    out = []
    for name in names:
        t0 = time.perf_counter()
        report, _ = runner.run_named(name, n)
        d = report.to_dict()
        d["seconds"] = round(time.perf_counter() - t0, 3)
        out.append(d)
    return out


def _script_targets(target: str):
    from .scripts import SCRIPT_NAMES, builtin_scripts
    pairs = [(s.name, s.n) for s in builtin_scripts()]
    if target != "all":
        name, _, dim = target.partition("@")
        pairs = [(nm, n) for nm, n in pairs if nm == name and (not dim or str(n) == dim)]
        if not pairs:
            raise UsageError(f"unknown script {target!r}; known: {', '.join(SCRIPT_NAMES)} "
                             "(optionally suffixed @n)", "E-SCRIPT")
    by_n = {}
    for name, n in pairs:
        by_n.setdefault(n, []).append(name)
    return by_n


def verify(target: str, jobs: int = 1, corrected: bool = False) -> dict:
    by_n = _script_targets(target)
    t0 = time.perf_counter()
    if jobs > 1 and len(by_n) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futs = {n: pool.submit(_run_scripts_for, n, names) for n, names in by_n.items()}
            script_reports = [r for n in sorted(futs) for r in futs[n].result()]
    else:
        script_reports = [r for n in sorted(by_n) for r in _run_scripts_for(n, by_n[n])]
    result = {"scripts": script_reports}
    if target == "all":
        from .variety import compare_relations, example_points, membership
        result["varieties"] = [compare_relations(n) for n in (8, 9, 10, 11)]
        result["points"] = [membership(p, claims).to_dict() for p, claims in example_points(corrected)]
    passed = (all(r["passed"] for r in result["scripts"])
              and all(v["agree"] for v in result.get("varieties", []))
              and all(p["passed"] for p in result.get("points", [])))
    result["passed"] = passed
    result["_seconds"] = round(time.perf_counter() - t0, 3)
    return result


def _verify_text(result: dict) -> str:
    from .isokit import VerificationReport, StepRecord
    lines = []
    for r in result["scripts"]:
        rep = VerificationReport(r["script"], r["n"], r["passed"],
                                 [StepRecord(s["index"], s["step"], s["fact"], s["ok"], s.get("message", ""))
                                  for s in r["steps"]],
                                 r["bindings"], r["conclusion"], r["failure"], tuple(r["notes"]))
        lines.append(rep.render())
    for v in result.get("varieties", []):
        lines.append(f"[{'PASS' if v['agree'] else 'FAIL'}] variety n={v['n']}: "
                     f"{v['derived_count']} derived vs {v['published_count']} published relations")
    for p in result.get("points", []):
        pt = p["point"]
        claims = ", ".join(f"{c}={'yes' if ok else 'NO'}" for c, ok in p["claims"].items())
        lines.append(f"[{'PASS' if p['passed'] else 'FAIL'}] point n={pt['n']} {pt['values']}: {claims}")
    lines.append(f"overall: {'PASS' if result['passed'] else 'FAIL'}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# commands


def cmd_variety(args) -> int:
    from .variety import compare_relations, jacobi_relations, known_relations
    n = _check_n(args.n, 3, 13)
    derived = jacobi_relations(n)
    result = {"derived": derived.to_dict()["equations"]}
    try:
        result["published"] = known_relations(n).to_dict()["equations"]
        result["comparison"] = compare_relations(n)
    except ValueError:
        result["published"] = None
        result["comparison"] = None
    ok = result["comparison"] is None or result["comparison"]["agree"]
    if args.format == "json":
        print(_dump(_envelope("variety", {"n": n}, result)))
    elif args.format == "text":
        for e in result["derived"]:
            print(f"{e['label']}: {e['poly']} = 0")
        if result["comparison"] is not None:
            print(f"published system {'agrees' if ok else 'DISAGREES'} (two-way span check)")
    else:
        for e in result["derived"]:
            print(rf"{parse(e['poly']).latex()} = 0 \\")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_check_point(args) -> int:
    from .variety import membership
    point = _load_point(args.file)
    claims = args.claim or None
    try:
        report = membership(point, claims)
    except ValueError as exc:
        raise UsageError(str(exc), "E-DIM")
    inputs = {"point": point.to_dict(), "claims": list(claims or [])}
    print(_dump(_envelope("check-point", inputs, report.to_dict())))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_deform(args) -> int:
    from .deform import canonical_deformation
    n = _check_n(args.n, 6, 13)
    d = canonical_deformation(n, args.direction)
    mu_t = d.deformed
    inputs = {"n": n, "direction": d.kind}
    if args.point:
        point = _load_point(args.point)
        if point.n != n:
            raise UsageError(f"point has n={point.n}, expected {n}", "E-DIM")
        mu_t = specialize(generic_filiform(n), point, mu_t)
        inputs["point"] = point.to_dict()
    if args.t is not None:
        t = _rational(args.t)
        mu_t = mu_t.substitute({T: const(t)})
        inputs["t"] = str(t)
    if args.format == "json":
        print(_dump(_envelope("deform", inputs, mu_t.to_dict())))
    else:
        sys.stdout.write(brackets_document(mu_t, args.format))
    return EXIT_OK


def cmd_iso_eqs(args) -> int:
    n = _check_n(args.n, 3, 13)
    if n < 6:
        raise UsageError("the canonical deformation needs n >= 6", "E-DIM")
    try:
        doc = export_equations(n, args.stage, t=args.t)
    except ValueError as exc:
        raise UsageError(str(exc), "E-STAGE")
    if doc.get("warning"):
        print(f"warning: {doc['warning']}", file=sys.stderr)
    if args.format == "json":
        doc = _envelope("iso-eqs", {"n": n, "stage": args.stage, "t": args.t}, doc)
        sys.stdout.write(_dump(doc) + "\n")
    else:
        sys.stdout.write(equations_document(doc, args.format))
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.format == "latex":
        raise UnsupportedFormat("latex", "verify")
    result = verify(args.target, jobs=args.jobs, corrected=args.corrected_witnesses)
    seconds = result.pop("_seconds")
    if args.format == "json":
        inputs = {"target": args.target, "corrected_witnesses": args.corrected_witnesses}
        timings = {"total_seconds": seconds} if args.timings else None
        if not args.timings:
            for r in result["scripts"]:
                r.pop("seconds", None)
        print(_dump(_envelope("verify", inputs, result, timings)))
    else:
        sys.stdout.write(_verify_text(result))
        if args.timings:
            print(f"total: {seconds:.2f}s")
    return EXIT_OK if result["passed"] else EXIT_FAIL


def cmd_export(args) -> int:
    what, fmt = args.what, args.format
    if what == "scripts":
        if fmt != "json":
            raise UnsupportedFormat(fmt, "scripts")
        from .scripts import builtin_scripts
        docs = [s.to_dict() for s in builtin_scripts()]
        print(_dump(_envelope("export", {"what": what}, docs)))
        return EXIT_OK
    if args.n is None:
        raise UsageError(f"export {what} needs --n")
    n = _check_n(args.n, 3, 13)
    if what == "brackets":
        mu = generic_filiform(n).mu
        if args.point:
            mu = specialize(generic_filiform(n), _load_point(args.point))
        if fmt == "json":
            print(_dump(_envelope("export", {"what": what, "n": n}, mu.to_dict())))
        else:
            sys.stdout.write(brackets_document(mu, fmt))
        return EXIT_OK
    # equations: the defining system of F^n plus, when available, the iso system
    from .variety import jacobi_relations
    variety = jacobi_relations(n).to_dict()["equations"]
    if fmt == "json":
        result = {"variety": variety}
        if n >= 6:
            result["isomorphism"] = export_equations(n, args.stage)
        print(_dump(_envelope("export", {"what": what, "n": n, "stage": args.stage}, result)))
    else:
        for e in variety:
            p = parse(e["poly"])
            print(f"{e['label']}: {p.latex() if fmt == 'latex' else p} = 0")
        if n >= 6:
            sys.stdout.write(equations_document(export_equations(n, args.stage), fmt))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="filiform", description="Exact verifier for linear deformations of filiform Lie algebras.")
    p.add_argument("--version", action="version", version=f"filiform {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("variety", help="defining equations of F^n, derived and published")
    s.add_argument("n", type=int)
    s.add_argument("--format", choices=FORMATS, default="json")
    s.set_defaults(func=cmd_variety)

    s = sub.add_parser("check-point", help="membership of a point in F^n, its components and open sets")
    s.add_argument("file")
    s.add_argument("--claim", action="append", help="claim to check (F9, C10_2, U11, ...); repeatable")
    s.set_defaults(func=cmd_check_point)

    s = sub.add_parser("deform", help="the linear deformation mu_t = mu + t*phi_D")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--point")
    s.add_argument("--t")
    s.add_argument("--direction", choices=("canonical", "D3", "D4"), default="canonical")
    s.add_argument("--format", choices=FORMATS, default="json")
    s.set_defaults(func=cmd_deform)

    s = sub.add_parser("iso-eqs", help="isomorphism equations E[i,j]^k")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--stage", choices=STAGES, default="raw")
    s.add_argument("--t")
    s.add_argument("--format", choices=FORMATS, default="json")
    s.set_defaults(func=cmd_iso_eqs)

    s = sub.add_parser("verify", help="replay built-in proof scripts ('all' adds variety and point checks)")
    s.add_argument("target", help="script name, name@n, or 'all'")
    s.add_argument("--format", choices=FORMATS, default="text")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--timings", action="store_true", help="include wall-clock timings (not deterministic)")
    s.add_argument("--corrected-witnesses", action="store_true",
                   help="use the repaired C11_2 density witness instead of the published one")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("export", help="export equations, brackets or scripts")
    s.add_argument("what", choices=("equations", "brackets", "scripts"))
    s.add_argument("--n", type=int)
    s.add_argument("--stage", choices=STAGES, default="raw")
    s.add_argument("--point")
    s.add_argument("--format", choices=FORMATS, default="json")
    s.set_defaults(func=cmd_export)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        if not getattr(args, "func", None):
            raise UsageError("a command is required (see --help)")
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be positive")
        return args.func(args)
    except UsageError as exc:
        print(f"error[{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
