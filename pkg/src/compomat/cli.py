"""Command line front end.

Exit status: 0 when the analysis ran (whatever it concluded), 1 on an
engine error such as a non-closed extracted groupoid or an exceeded cap,
2 on usage, parse, schema or resolution errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Sequence

from . import config
from .documents import (
    arrow_to_json,
    build_composite,
    build_groupoids,
    canonical_json,
    load_schema,
    parse_body_file,
    parse_partial_square,
    report_to_json,
    report_to_text,
    square_to_json,
)
from .errors import CompomatError, ResolutionError
from .fixtures import CYCLE3, SIGNED_CYCLE3, resolve_fixture
from .groupoid import check_axioms, intersect, orbit_partition
from .material import Composite
from .rational import format_rational, parse_rational
from .squares import core_groupoid
from .uniformity import classify_composite, conjugacy_conditions, is_strongly_uniform

FIXTURE_PREFIXES = ("pair:", "crystalline:", "triclinic:", "random:")


def _load(target: str, tol: str | None) -> tuple[Composite, dict]:
    """Composite plus the named groupoids of a file (fixtures: omega1/omega2)."""
    if os.path.exists(target):
        doc = parse_body_file(target)
        return build_composite(doc, tol), build_groupoids(doc)
    if target.startswith(FIXTURE_PREFIXES):
        c = resolve_fixture(target)
        return c, {"omega1": c.horizontal, "omega2": c.vertical}
    raise ResolutionError(f"{target!r} is neither a readable file nor a fixture name")


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(canonical_json(payload))
    else:
        sys.stdout.write(text)


def _violation_json(v, objects) -> dict:
    return {
        "axiom": v.axiom,
        "arrows": [arrow_to_json(a, objects) if a is not None else None for a in v.arrows],
        "explanation": v.explanation,
    }


def cmd_axioms(args) -> int:
    if os.path.exists(args.target):
        groupoids = build_groupoids(parse_body_file(args.target))
    else:
        c, groupoids = _load(args.target, args.tol)
    results = []
    lines = []
    for name in sorted(groupoids):
        G = groupoids[name]
        rep = check_axioms(G)
        results.append(
            {
                "groupoid": name,
                "arrows": len(G),
                "passed": rep.passed,
                "violations": [_violation_json(v, G.objects) for v in rep.violations],
            }
        )
        lines.append(f"{name}: {'passed' if rep.passed else 'FAILED'} ({len(G)} arrows, {len(rep.violations)} violations)")
        lines += [f"    [{v.axiom}] {v.explanation}: {', '.join(str(a) for a in v.arrows)}" for v in rep.violations]
    _emit(args, {"schema_version": "1", "groupoids": results}, "\n".join(lines) + "\n")
    return 0


def cmd_classify(args) -> int:
    c, _ = _load(args.target, args.tol)
    report = classify_composite(c, threads=args.threads)
    if args.json or args.format == "json":
        sys.stdout.write(report_to_json(report, c.body))
    else:
        sys.stdout.write(report_to_text(report, c.body))
    return 0


def cmd_complete(args) -> int:
    from .uniformity import complete_square

    c, _ = _load(args.target, args.tol)
    try:
        with open(args.partial, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ResolutionError(f"cannot read {args.partial}: {exc.strerror}") from None
    partial = parse_partial_square(text, c)
    squares = complete_square(c, partial)
    payload = {"schema_version": "1", "completions": [square_to_json(s, c.body) for s in squares]}
    lines = [f"{len(squares)} completion(s)"]
    for s in squares:
        lines.append(f"    bottom {s.bottom}  top {s.top}  right {s.right}  left {s.left}")
    _emit(args, payload, "\n".join(lines) + "\n")
    return 0


def cmd_core(args) -> int:
    c, _ = _load(args.target, args.tol)
    core = core_groupoid(c)
    G = core.groupoid
    rep = check_axioms(G)
    arrows = []
    for a in G.arrows:
        sq = core.squares[a]
        arrows.append({"src": c.body[a.src], "dst": c.body[a.dst], "top": arrow_to_json(sq.top, c.body), "left": arrow_to_json(sq.left, c.body)})
    payload = {"schema_version": "1", "arrows": arrows, "axioms_passed": rep.passed, "transitive": len(orbit_partition(G).classes) <= 1}
    lines = [f"core groupoid: {len(G)} arrows, axioms {'passed' if rep.passed else 'FAILED'}"]
    lines += [f"    {x['src']}->{x['dst']}: top {x['top']['payload']}, left {x['left']['payload']}" for x in arrows]
    _emit(args, payload, "\n".join(lines) + "\n")
    return 0


def cmd_intersect(args) -> int:
    c, _ = _load(args.target, args.tol)
    G = intersect(c.horizontal, c.vertical)
    part = orbit_partition(G)
    payload = {
        "schema_version": "1",
        "arrows": [arrow_to_json(a, c.body) for a in G.arrows],
        "orbits": [[c.body[x] for x in cls] for cls in part.classes],
        "kind": part.kind.value,
        "uniform": len(part.classes) <= 1,
    }
    text = f"intersection: {len(G)} arrows, orbits {payload['orbits']}, {part.kind.value}\n"
    _emit(args, payload, text)
    return 0


def cmd_demo(args) -> int:
    if args.example == "triclinic":
        from .search import triclinic_search

        findings = triclinic_search(max_points=args.max_points)
        lines = [f"{s['n_points']} points: {s['instances']} instances, " + ", ".join(f"{k}={v}" for k, v in s.items() if k not in ('n_points', 'instances')) for s in findings["per_size"]]
        lines.append(f"listed instances (commuting on distinct triples): {len(findings['instances'])}")
        lines.append(f"conclusion: {findings['conclusion']}")
        _emit(args, findings, "\n".join(lines) + "\n")
        return 0
    target = {
        "pair": f"pair:{args.seed if args.seed is not None else 3}",
        "crystalline": "crystalline:default",
        "random": f"random:{args.seed if args.seed is not None else 0}",
    }[args.example]
    c = resolve_fixture(target)
    report = classify_composite(c, threads=args.threads)
    if args.example != "crystalline":
        sys.stdout.write(report_to_json(report, c.body) if args.format == "json" else report_to_text(report, c.body))
        return 0
    cond = {
        "cycle_signed_cycle": conjugacy_conditions(CYCLE3, SIGNED_CYCLE3),
        "cycle_signed_cycle_inverse": conjugacy_conditions(CYCLE3, SIGNED_CYCLE3.inverse()),
    }
    strong = is_strongly_uniform(c)
    payload = {
        "report": json.loads(report_to_json(report, c.body)),
        "conjugacy_conditions": cond,
    }
    text = report_to_text(report, c.body)
    for key, label in (("cycle_signed_cycle", "cycle, signed cycle"), ("cycle_signed_cycle_inverse", "cycle, signed cycle inverse")):
        held = [k for k, v in cond[key].items() if v and "_" not in k]
        text += f"conjugacy conditions ({label}): {', '.join(held) or 'none'} hold\n"
    text += f"strongly uniform: {strong.status}\n"
    _emit(args, payload, text)
    return 0


def _tol(text: str) -> str:
    try:
        q = parse_rational(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a rational p/q: {text!r}") from None
    if q < 0:
        raise argparse.ArgumentTypeError("tolerance must be non-negative")
    return format_rational(q)


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=_positive, default=None, help=f"closure and square-count cap (env {config.CAP_ENV})")
    common.add_argument("--tol", type=_tol, default=None, help="tolerance p/q for response-extracted groupoids")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--threads", type=_positive, default=1)

    p = argparse.ArgumentParser(prog="compomat", description="Uniformity analysis of two-material composites.")
    p.add_argument("--emit-schema", nargs="?", const="report", choices=("report", "body"), help="print a JSON schema and exit")
    sub = p.add_subparsers(dest="command")

    s = sub.add_parser("axioms", parents=[common], help="check groupoid axioms")
    s.add_argument("target", help="body file or fixture name")
    s.set_defaults(func=cmd_axioms)

    s = sub.add_parser("classify", parents=[common], help="uniformity report")
    s.add_argument("target")
    s.add_argument("--json", action="store_true", help="same as --format json")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("complete", parents=[common], help="complete a partial square")
    s.add_argument("target")
    s.add_argument("--partial", required=True, help="JSON file with some of bottom/top/right/left")
    s.set_defaults(func=cmd_complete)

    s = sub.add_parser("core", parents=[common], help="core groupoid")
    s.add_argument("target")
    s.set_defaults(func=cmd_core)

    s = sub.add_parser("intersect", parents=[common], help="composite groupoid")
    s.add_argument("target")
    s.set_defaults(func=cmd_intersect)

    s = sub.add_parser("demo", parents=[common], help="run a built-in example")
    s.add_argument("example", choices=("pair", "crystalline", "triclinic", "random"))
    s.add_argument("--seed", type=int, default=None, help="random seed (pair: number of points)")
    s.add_argument("--max-points", type=int, default=5, help="triclinic search bound")
    s.set_defaults(func=cmd_demo)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.emit_schema:
        sys.stdout.write(canonical_json(load_schema(args.emit_schema)))
        return 0
    if not args.command:
        parser.print_usage(sys.stderr)
        return 2
    config.set_cap_override(args.cap)
    try:
        return args.func(args)
    except CompomatError as exc:
        sys.stderr.write(f"error [{exc.code}]: {exc}\n")
        return exc.exit_status
    finally:
        config.set_cap_override(None)


if __name__ == "__main__":
    sys.exit(main())
