"""Command-line entry point.

Inputs are quiver documents or ``fixture:NAME``.  Exit codes: 0 success,
1 negative property verdict, 2 parse or structural error, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path as FsPath

from . import fixtures
from .contraction import (
    ContractionError,
    DriverError,
    check_relations_preserved,
    contract_set,
    is_cancellative,
    maximal_contraction_sequence,
    parse_tie_break,
    step_lines,
)
from .cycle_algebra import Bounds, Comparison, Cyclicity, NotCancellative, default_bounds, verify_cyclic
from .document import emit, parse, to_dot
from .matchings import Nondegeneracy, characteristic_polygon, classify, nondegeneracy
from .pathalg import DEFAULT_MAX_STATES, BudgetExhausted
from .quiver import DimerQuiver, StructuralError, validate

OK, NEGATIVE, STRUCTURAL, INCONCLUSIVE = 0, 1, 2, 3


class Report:
    def __init__(self):
        self.lines: list[str] = []
        self.data: dict = {}

    def say(self, line: str) -> None:
        self.lines.append(line)


def load(spec: str) -> tuple[DimerQuiver, FsPath | None]:
    if spec.startswith("fixture:"):
        return fixtures.get(spec[len("fixture:"):]), None
    path = FsPath(spec)
    return parse(path.read_text(), path.stem), path


def _bounds(args, source: DimerQuiver) -> Bounds:
    b = default_bounds(source)
    return Bounds(args.max_len or b.max_len, args.max_u if args.max_u is not None else b.max_u)


def _cyclic(rep: Report, seq, args) -> int:
    try:
        r = verify_cyclic(seq, _bounds(args, seq.source))
    except NotCancellative as e:
        rep.say(f"cyclicity: refused ({e})")
        rep.data["cyclicity"] = {"verdict": "refused", "reason": str(e)}
        return NEGATIVE
    for line in r.lines():
        rep.say(line)
    if r.comparison is Comparison.PROPER_SUBSET:
        rep.say("not-cyclic: S ⊊ S'")
    for w in r.warnings:
        rep.say(f"warning: {w}")
    rep.data["cyclicity"] = {
        "S": [list(v) for v in r.S.vectors],
        "S_prime": [list(v) for v in r.S_prime.vectors],
        "variables": [list(D.arrows) for D in r.S.variables],
        "comparison": r.comparison.value,
        "verdict": r.verdict.value,
        "bounds": {"max_len": r.bounds.max_len, "max_u": r.bounds.max_u},
        "warnings": list(r.warnings),
    }
    if r.verdict is Cyclicity.INCONCLUSIVE:
        return INCONCLUSIVE
    if r.verdict is Cyclicity.NOT_CYCLIC and args.expect_cyclic:
        return NEGATIVE
    return OK


def cmd_validate(q, src, args, rep: Report) -> int:
    report = validate(q)
    rep.data["valid"] = report.ok
    rep.data["violations"] = [str(v) for v in report.violations]
    if report.ok:
        rep.say(f"{q.name}: ok ({q.n_vertices} vertices, {q.n_arrows} arrows, {len(q.faces)} faces)")
        return OK
    for v in report.violations:
        rep.say(f"violation: {v}")
    return STRUCTURAL


def cmd_matchings(q, src, args, rep: Report) -> int:
    cat = classify(q)
    nd = nondegeneracy(q, max_states=args.budget)
    rep.say(f"{len(cat.matchings)} perfect matchings; {nd.value}")
    rep.data["matchings"] = [list(D.arrows) for D in cat.matchings]
    rep.data["nondegeneracy"] = nd.value
    for i, D in enumerate(cat.matchings):
        flags = [f for f, on in (("simple", cat.simple[i]), ("rigid", cat.rigid[i])) if on]
        rep.say(f"  D{i} = {D.names(q)}" + (f"  [{', '.join(flags)}]" if flags else ""))
    if args.classify:
        for k, members in enumerate(cat.classes):
            rep.say(f"class {k}: " + " ~ ".join(f"D{i}" for i in members))
        names = lambda s: ", ".join(q.arrow_name(a) for a in sorted(s)) or "none"
        rep.say(f"nonrigid arrows: {names(cat.nonrigid_arrows)}")
        rep.say(f"rigid arrows: {names(cat.rigid_arrows)}")
        if cat.pseudo:
            rep.say(f"pseudo-arrows: {names(cat.pseudo)}")
        rep.data["classes"] = [list(c) for c in cat.classes]
        rep.data["simple"] = list(cat.simple)
        rep.data["rigid"] = list(cat.rigid)
        rep.data["nonrigid_arrows"] = sorted(cat.nonrigid_arrows)
        rep.data["pseudo_arrows"] = sorted(cat.pseudo)
    return INCONCLUSIVE if nd is Nondegeneracy.INCONCLUSIVE else OK


def _target_stats(rep: Report, t: DimerQuiver) -> None:
    lengths = sorted(len(f.boundary) for f in t.faces)
    rep.say(f"target: {t.n_vertices} vertices, {t.n_arrows} arrows, face lengths {lengths}")
    rep.data["target"] = {"vertices": t.n_vertices, "arrows": t.n_arrows, "face_lengths": lengths}


def cmd_run(q, src, args, rep: Report) -> int:
    seq = maximal_contraction_sequence(q, parse_tie_break(args.tie_break), max_states=args.budget)
    for line in step_lines(seq):
        rep.say(line)
    rep.data["steps"] = [s.arrow for s in seq.steps]
    t = seq.target
    _target_stats(rep, t)
    canc = is_cancellative(t, max_states=args.budget)
    rep.say(f"cancellative: {canc.value}")
    rep.data["cancellative"] = canc.value
    out = FsPath(args.out) if args.out else (src.with_name(src.stem + ".target.dq") if src else FsPath(f"{q.name}.target.dq"))
    out.write_text(emit(t))
    rep.say(f"wrote {out}")
    rep.data["target_document"] = str(out)
    return _cyclic(rep, seq, args)


def cmd_contract(q, src, args, rep: Report) -> int:
    arrows = [a for a in args.arrows.split(",") if a]
    seq = contract_set(q, arrows)
    for line in step_lines(seq):
        rep.say(line)
    rep.data["steps"] = [s.arrow for s in seq.steps]
    _target_stats(rep, seq.target)
    rel = check_relations_preserved(seq, args.budget)
    rep.say(f"relations preserved: {'yes' if rel.ok else 'no'}")
    rep.data["relations_preserved"] = rel.ok
    code = _cyclic(rep, seq, args)
    if not rel.ok and code == OK:
        code = NEGATIVE
    return code


def cmd_polygon(q, src, args, rep: Report) -> int:
    poly = characteristic_polygon(q)
    if poly is None:
        rep.say("no matchings; polygon undefined")
        rep.data["polygon"] = None
        return NEGATIVE
    rep.say("lattice points: " + " ".join(f"({x},{y})" for x, y in poly.points))
    rep.say("hull: " + " ".join(f"({x},{y})" for x, y in poly.hull))
    rep.data["polygon"] = {"points": [list(p) for p in poly.points], "hull": [list(p) for p in poly.hull]}
    return OK


def cmd_export_dot(q, src, args, rep: Report) -> int:
    text = to_dot(q)
    rep.lines.extend(text.rstrip("\n").splitlines())
    rep.data["dot"] = text
    return OK


COMMANDS = {
    "validate": cmd_validate,
    "matchings": cmd_matchings,
    "run": cmd_run,
    "contract": cmd_contract,
    "polygon": cmd_polygon,
    "export-dot": cmd_export_dot,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", help="quiver document, or fixture:NAME")
    common.add_argument("--max-len", type=int, default=None, help="cycle length bound for S and S'")
    common.add_argument("--max-u", type=int, default=None, help="homology bound per coordinate")
    common.add_argument("--budget", type=int, default=DEFAULT_MAX_STATES, help="state cap for rewriting searches")
    common.add_argument("--expect-cyclic", action="store_true", help="exit 1 on a not-cyclic verdict")
    common.add_argument("--json-report", metavar="PATH", help="also write the report as JSON ('-' for stdout)")

    p = argparse.ArgumentParser(prog="dimercontract", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("validate", parents=[common], help="check the dimer axioms")
    m = sub.add_parser("matchings", parents=[common], help="perfect matchings and their taxonomy")
    m.add_argument("--classify", action="store_true", help="show classes and arrow rigidity")
    r = sub.add_parser("run", parents=[common], help="maximal nonrigid contraction and cyclicity")
    r.add_argument("--tie-break", default="id", help="'id' (default) or 'seed:N'")
    r.add_argument("--out", help="where to write the target document")
    c = sub.add_parser("contract", parents=[common], help="contract an arbitrary arrow forest")
    c.add_argument("--arrows", required=True, help="comma-separated ids or labels")
    sub.add_parser("polygon", parents=[common], help="matching lattice points and hull")
    sub.add_parser("export-dot", parents=[common], help="Graphviz description")
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    rep = Report()
    rep.data["command"] = args.command
    try:
        q, src = load(args.input)
        rep.data["input"] = q.name or args.input
        code = COMMANDS[args.command](q, src, args, rep)
    except (StructuralError, ContractionError, KeyError, OSError) as e:
        rep.say(f"error: {e.args[0] if e.args else e}")
        rep.data["error"] = str(e)
        code = STRUCTURAL
    except DriverError as e:
        rep.say(f"refused: {e}")
        rep.data["error"] = str(e)
        code = NEGATIVE
    except BudgetExhausted as e:
        rep.say(f"inconclusive: {e}")
        rep.data["error"] = str(e)
        code = INCONCLUSIVE
    rep.data["exit_code"] = code
    print("\n".join(rep.lines))
    if args.json_report:
        text = json.dumps(rep.data, indent=2, sort_keys=True)
        if args.json_report == "-":
            print(text)
        else:
            FsPath(args.json_report).write_text(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
