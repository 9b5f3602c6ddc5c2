"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 invalid input or no applicable
method, 3 solvers disagree.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import explorer
from .closed_forms import NotApplicable, nim_closed
from .diagrams import DiagramStyle, emit_game_dot, emit_structure_dot
from .formats import Instance, family_json, load_family_raw, load_instance, split_tokens
from .game import is_generating, nim_bruteforce, nim_table, optimal_move
from .geometry import GeometryError, InvalidGeometry, elements_of, validate_axioms
from .structure import class_of_position, nim_structure, solve_structure

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_DISAGREE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _instance(args) -> Instance:
    inst = load_instance(args.input)
    if getattr(args, "winning", None):
        inst.winning = inst.resolve(split_tokens(args.winning))
    return inst


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def cmd_validate(args) -> int:
    try:
        data = json.loads(Path(args.input).read_text(encoding="utf-8"))
        if data.get("type") == "family":
            n, fam = load_family_raw(args.input)
        else:
            geom = load_instance(args.input).geometry
            n, fam = geom.n, list(geom.convex)
        report = validate_axioms(n, fam)
    except GeometryError as exc:
        _emit(args, {"valid": False, "error": str(exc)}, f"malformed input: {exc}")
        return EXIT_INVALID
    payload = {"valid": not report, "n": n, "convex_sets": len(set(fam)),
               "violations": [{"axiom": v.axiom, "witness": [elements_of(w) for w in v.witness],
                               "message": v.message} for v in report]}
    if report:
        lines = ["invalid convex geometry:"] + [f"  [{v.axiom}] {v.message}" for v in report]
    else:
        lines = [f"valid convex geometry: n = {n}, {len(set(fam))} convex sets"]
    _emit(args, payload, "\n".join(lines))
    return EXIT_INVALID if report else EXIT_OK


METHODS = ("brute", "structure", "closed")


def cmd_solve(args) -> int:
    inst = _instance(args)
    spec = inst.spec()
    methods = METHODS if args.method == "all" else (args.method,)
    values: dict[str, int] = {}
    notes: dict[str, str] = {}
    for m in methods:
        if m == "brute":
            values[m] = nim_bruteforce(spec)
        elif m == "structure":
            values[m] = nim_structure(spec)
        else:
            try:
                values[m], notes[m] = nim_closed(inst)
            except NotApplicable as exc:
                if args.method == "closed":
                    print(f"no closed form: {exc}", file=sys.stderr)
                    return EXIT_INVALID
                notes[m] = f"not applicable: {exc}"
    distinct = set(values.values())
    payload = {"instance": inst.name, "winning": elements_of(spec.winning),
               "nim": values, "notes": notes, "agree": len(distinct) <= 1}
    if len(methods) == 1:
        text = f"nim = {values[methods[0]]}"
    else:
        text = "\n".join(f"{m:>9}: " + (str(values[m]) if m in values else notes[m])
                         for m in methods)
        if len(distinct) == 1:
            text += f"\nnim = {distinct.pop()}"
    _emit(args, payload, text)
    return EXIT_OK if payload["agree"] else EXIT_DISAGREE


def cmd_diagram(args) -> int:
    inst = _instance(args)
    spec = inst.spec()
    if args.dot == "game":
        text = emit_game_dot(spec)
    else:
        text = emit_structure_dot(solve_structure(spec), DiagramStyle(args.dot))
    if args.out:
        out = Path(args.out)
        if out.is_dir():
            out = out / f"{inst.name}.{args.dot}.dot"
        out.write_text(text, encoding="utf-8")
        print(f"wrote {out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_position(args) -> int:
    inst = _instance(args)
    spec = inst.spec()
    p = inst.resolve(split_tokens(args.elements)) if args.elements else 0
    geom = spec.geometry
    diagram = solve_structure(spec)
    cls, predicted = class_of_position(diagram, p)
    table = nim_table(spec)
    terminal = is_generating(spec, p)
    move = None if terminal else optimal_move(spec, p, table)
    payload = {"position": elements_of(p), "terminal": terminal,
               "class": elements_of(cls.subset), "type": list(cls.type),
               "predicted_nim": predicted, "brute_nim": table[p],
               "optimal_move": None if move is None else elements_of(move)}
    lines = [f"position: {geom.format_set(p)}"]
    if terminal:
        lines.append("terminal, nim 0")
    lines += [f"class: X_{geom.format_set(cls.subset)} type {cls.type}",
              f"predicted nim: {predicted}", f"brute-force nim: {table[p]}"]
    if not terminal:
        if move is None:
            lines.append("optimal move: none (every option is nonzero)")
        else:
            lines.append(f"optimal move: add {geom.format_set(move & ~p)}"
                         f" -> {geom.format_set(move)}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if predicted == table[p] else EXIT_DISAGREE


def cmd_enumerate(args) -> int:
    flag = {"any": None, "yes": True, "no": False}[args.empty]
    geoms = explorer.enumerate_geometries(args.n, flag)
    payload = {"n": args.n, "count": len(geoms), "geometries": [family_json(g) for g in geoms]}
    lines = [f"{len(geoms)} convex geometries on {args.n} points up to isomorphism"]
    for i, g in enumerate(geoms):
        lines.append(f"  {i}: " + " ".join(g.format_set(k) if k else "∅" for k in g.convex))
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _campaign(args) -> explorer.CampaignConfig:
    cfg = explorer.CampaignConfig.load(args.config) if args.config else explorer.CampaignConfig()
    for attr in ("source", "min_size", "max_size", "count", "seed", "dim", "workers"):
        value = getattr(args, attr)
        if value is not None:
            setattr(cfg, attr, value)
    if args.solvers:
        cfg.solvers = split_tokens(args.solvers)
    if args.out:
        cfg.sink = args.out
    return cfg


def cmd_cross_validate(args) -> int:
    cfg = _campaign(args)
    report = explorer.cross_validate(cfg)
    bad = report["disagreements"]
    summary = {k: report[k] for k in ("instances", "evaluations")}
    summary["disagreements"] = len(bad)
    text = (f"{report['instances']} instances, {report['evaluations']} evaluations, "
            f"{len(bad)} disagreements")
    if bad:
        text += f"\nfirst: {bad[0]['instance']} W={bad[0]['winning']} {bad[0]['nim']}"
    _emit(args, {**summary, "first": bad[0] if bad else None}, text)
    return EXIT_DISAGREE if bad else EXIT_OK


def cmd_spectrum(args) -> int:
    cfg = _campaign(args)
    extra = [load_instance(p) for p in args.include]
    report = explorer.spectrum(cfg, extra=extra)
    text = f"{report['total']} evaluations ({report['solver']})\n" + "\n".join(
        f"  nim {k}: {v}" for k, v in report["counts"].items())
    _emit(args, report, text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="convexgen", description="Achievement games on convex geometries.")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        p.add_argument("--json", action="store_true", help="machine-readable output")
        return p

    p = add("validate", cmd_validate, "check the convex geometry axioms")
    p.add_argument("--input", required=True)

    for name, func, help_text in (("solve", cmd_solve, "compute the nim number"),
                                  ("diagram", cmd_diagram, "emit a DOT diagram"),
                                  ("position", cmd_position, "inspect one position")):
        p = add(name, func, help_text)
        p.add_argument("--input", required=True)
        p.add_argument("--winning", help="comma-separated indices or labels")
        if name == "solve":
            p.add_argument("--method", choices=[*METHODS, "all"], default="structure")
        if name == "diagram":
            p.add_argument("--dot", choices=["game", "structure", "orbit"], default="structure")
            p.add_argument("--out", help="file or directory for the DOT output")
        if name == "position":
            p.add_argument("--elements", default="", help="comma-separated chosen points")

    p = add("enumerate", cmd_enumerate, "list convex geometries up to isomorphism")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--empty", choices=["any", "yes", "no"], default="any",
                   help="require the empty set to be convex (yes) or not (no)")

    for name, func, help_text in (("cross-validate", cmd_cross_validate, "compare solvers"),
                                  ("spectrum", cmd_spectrum, "histogram of nim values")):
        p = add(name, func, help_text)
        p.add_argument("--config", help="campaign config JSON")
        p.add_argument("--source")
        p.add_argument("--min-size", type=int)
        p.add_argument("--max-size", type=int)
        p.add_argument("--count", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--dim", type=int)
        p.add_argument("--workers", type=int)
        p.add_argument("--solvers", help="comma-separated: brute,structure,closed")
        p.add_argument("--out", help="report path")
        if name == "spectrum":
            p.add_argument("--include", action="append", default=[],
                           help="extra instance file (uses its winning set)")
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (GeometryError, InvalidGeometry) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
