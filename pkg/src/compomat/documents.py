"""JSON documents: body files, partial squares and reports.

Canonical serialization is ``json.dumps(indent=2, ensure_ascii=False)``
plus a trailing newline, with fields in schema order and rationals in
lowest terms. A document written by :func:`dump_body` parses and
re-serializes to the same bytes.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Any

import jsonschema

from .errors import ParseError, ResolutionError, SchemaError
from .groupoid import Arrow, FiniteGroupoid, Label, Mode, TabularStructure
from .material import Composite, build_material_groupoid, make_response
from .rational import RationalMatrix3, format_rational, parse_rational, signed_permutation_matrices
from .squares import PartialSquare, Square
from .uniformity import Flag, UniformityReport

__all__ = [
    "BodyDocument",
    "load_schema",
    "parse_body_text",
    "parse_body_file",
    "dump_body",
    "build_composite",
    "build_groupoids",
    "export_composite",
    "arrow_to_json",
    "square_to_json",
    "report_to_json",
    "report_to_text",
    "parse_partial_square",
    "canonical_json",
]


_FLAT_LIST = re.compile(r"\[\s*((?:-?\d+|\"[^\"\\]*\"|true|false|null)(?:,\s*(?:-?\d+|\"[^\"\\]*\"|true|false|null))*)\s*\]")


def canonical_json(obj: Any) -> str:
    """Indented JSON with lists of scalars kept on one line."""
    text = json.dumps(obj, indent=2, ensure_ascii=False)
    text = _FLAT_LIST.sub(lambda m: "[" + ", ".join(x.strip() for x in m.group(1).split(",\n")) + "]", text)
    return text + "\n"


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    """``name`` is ``body`` or ``report``."""
    text = resources.files("compomat").joinpath("schemas", f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def _validate(instance: Any, schema_name: str) -> None:
    validator = jsonschema.Draft202012Validator(load_schema(schema_name))
    errors = sorted(validator.iter_errors(instance), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise SchemaError(f"{where}: {err.message}")


# body documents


@dataclass
class BodyDocument:
    """Validated body file. ``raw`` keeps the document tree with rationals
    normalized; serialization writes it back in canonical form."""

    schema_version: str
    objects: list[str]
    groupoids: list[dict]
    responses: list[dict]
    composite: dict
    raw: dict = field(repr=False, default_factory=dict)

    def groupoid_names(self) -> list[str]:
        return [g["name"] for g in self.groupoids]


def _normalize_matrix(m: list) -> list:
    return [[format_rational(parse_rational(v)) for v in row] for row in m]


def _normalize_arrow(a: dict) -> dict:
    payload = a["payload"]
    if isinstance(payload, list):
        payload = _normalize_matrix(payload)
    return {"src": a["src"], "dst": a["dst"], "payload": payload}


def _normalize(doc: dict) -> dict:
    out: dict[str, Any] = {"schema_version": doc["schema_version"], "objects": list(doc["objects"])}
    groupoids = []
    for g in doc["groupoids"]:
        e: dict[str, Any] = {"name": g["name"], "mode": g["mode"]}
        if "objects" in g:
            e["objects"] = list(g["objects"])
        if "ambient" in g:
            e["ambient"] = g["ambient"]
        e["arrows"] = [_normalize_arrow(a) for a in g["arrows"]]
        if "tables" in g:
            t = g["tables"]
            e["tables"] = {"identity": dict(t["identity"]), "inverse": list(t["inverse"]), "compose": [list(r) for r in t["compose"]]}
        groupoids.append(e)
    out["groupoids"] = groupoids
    if "responses" in doc:
        rs = []
        for r in doc["responses"]:
            e = {"name": r["name"], "kind": r["kind"]}
            if "params" in r:
                e["params"] = r["params"]
            if "samples" in r:
                e["samples"] = [_normalize_matrix(m) for m in r["samples"]]
            rs.append(e)
        out["responses"] = rs
    comp: dict[str, Any] = {}
    if "name" in doc["composite"]:
        comp["name"] = doc["composite"]["name"]
    for key in ("omega1", "omega2"):
        src = doc["composite"][key]
        if isinstance(src, dict):
            e = {"response": src["response"]}
            if "candidates" in src:
                c = src["candidates"]
                e["candidates"] = c if isinstance(c, str) else [_normalize_arrow(a) for a in c]
            if "tol" in src:
                e["tol"] = format_rational(parse_rational(src["tol"]))
            src = e
        comp[key] = src
    if "require_transitive" in doc["composite"]:
        comp["require_transitive"] = doc["composite"]["require_transitive"]
    out["composite"] = comp
    return out


def parse_body_text(text: str) -> BodyDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    _validate(data, "body")
    raw = _normalize(data)
    _check_references(raw)
    return BodyDocument(
        raw["schema_version"], raw["objects"], raw["groupoids"], raw.get("responses", []), raw["composite"], raw
    )


def parse_body_file(path) -> BodyDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise ParseError(f"{path} is not UTF-8") from None
    return parse_body_text(text)


def dump_body(doc: BodyDocument) -> str:
    return canonical_json(doc.raw)


def _check_references(raw: dict) -> None:
    names = [g["name"] for g in raw["groupoids"]]
    if len(set(names)) != len(names):
        raise ResolutionError("duplicate groupoid name")
    rnames = [r["name"] for r in raw.get("responses", [])]
    if len(set(rnames)) != len(rnames):
        raise ResolutionError("duplicate response name")
    for i, g in enumerate(raw["groupoids"]):
        objs = set(g.get("objects", raw["objects"]))
        for j, a in enumerate(g["arrows"]):
            for end in ("src", "dst"):
                if a[end] not in objs:
                    raise ResolutionError(f"groupoids/{i}/arrows/{j}/{end}: unknown object {a[end]!r}")
        if g["mode"] == "table" and "tables" not in g and "ambient" not in g:
            raise ResolutionError(f"groupoids/{i}: table groupoid needs 'tables' or 'ambient'")
        if "ambient" in g and g["ambient"] not in names:
            raise ResolutionError(f"groupoids/{i}/ambient: unknown groupoid {g['ambient']!r}")
    for key in ("omega1", "omega2"):
        src = raw["composite"][key]
        if isinstance(src, str):
            if src not in names:
                raise ResolutionError(f"composite/{key}: unknown groupoid {src!r}")
        elif src["response"] not in rnames:
            raise ResolutionError(f"composite/{key}/response: unknown response {src['response']!r}")


def _arrow_from_json(a: dict, objects: list[str], mode: str) -> Arrow:
    try:
        x, y = objects.index(a["src"]), objects.index(a["dst"])
    except ValueError:
        raise ResolutionError(f"arrow {a} references an unknown object") from None
    p = a["payload"]
    if mode == "matrix":
        if not isinstance(p, list):
            raise SchemaError(f"matrix groupoid arrow has a label payload {p!r}")
        return Arrow(x, y, RationalMatrix3(p))
    if not isinstance(p, str):
        raise SchemaError("table groupoid arrow has a matrix payload")
    return Arrow(x, y, Label(p))


def build_groupoids(doc: BodyDocument) -> dict[str, FiniteGroupoid]:
    built: dict[str, FiniteGroupoid] = {}
    pending = list(doc.groupoids)
    # groupoids with an ambient reference wait for their ambient one
    while pending:
        progressed = False
        for g in list(pending):
            if "ambient" in g and g["ambient"] not in built:
                continue
            objects = g.get("objects", doc.objects)
            arrows = [_arrow_from_json(a, objects, g["mode"]) for a in g["arrows"]]
            table = None
            if g["mode"] == "table":
                if "ambient" in g:
                    table = built[g["ambient"]].table
                else:
                    table = _table_from_json(g["tables"], arrows, objects, g["name"])
            try:
                built[g["name"]] = FiniteGroupoid(objects, arrows, Mode(g["mode"]), table, name=g["name"])
            except ValueError as exc:
                raise SchemaError(f"{g['name']}: {exc}") from None
            pending.remove(g)
            progressed = True
        if not progressed:
            raise ResolutionError("cyclic ambient references between table groupoids")
    return built


def _table_from_json(t: dict, arrows: list[Arrow], objects: list[str], name: str) -> TabularStructure:
    m = len(arrows)

    def at(i: int, where: str) -> Arrow:
        if not 0 <= i < m:
            raise ResolutionError(f"{name}: {where} index {i} out of range")
        return arrows[i]

    ts = TabularStructure()
    for obj, i in t["identity"].items():
        if obj not in objects:
            raise ResolutionError(f"{name}: identity for unknown object {obj!r}")
        ts.identity[objects.index(obj)] = at(i, "identity")
    if len(t["inverse"]) != m:
        raise ResolutionError(f"{name}: inverse table must list one entry per arrow")
    for i, j in enumerate(t["inverse"]):
        ts.inverse[arrows[i]] = at(j, "inverse")
    for i, j, k in t["compose"]:
        ts.compose[(at(i, "compose"), at(j, "compose"))] = at(k, "compose")
    return ts


def _extract(doc: BodyDocument, source: dict, tol_override: str | None) -> FiniteGroupoid:
    r = next(r for r in doc.responses if r["name"] == source["response"])
    samples = [RationalMatrix3(m) for m in r["samples"]] if "samples" in r else None
    try:
        W = make_response(r["kind"], doc.objects, r.get("params", {}), samples, name=r["name"])
    except ValueError as exc:
        raise ResolutionError(str(exc)) from None
    cand = source.get("candidates", "signed_permutations")
    n = len(doc.objects)
    if cand == "signed_permutations":
        pool = [Arrow(x, y, m) for x in range(n) for y in range(n) for m in signed_permutation_matrices()]
    else:
        pool = [_arrow_from_json(a, doc.objects, "matrix") for a in cand]
    tol = tol_override if tol_override is not None else source.get("tol", "0")
    return build_material_groupoid(W, pool, tol, name=r["name"]).groupoid


def build_composite(doc: BodyDocument, tol: str | None = None) -> Composite:
    groupoids = build_groupoids(doc)
    sides = []
    for key in ("omega1", "omega2"):
        src = doc.composite[key]
        sides.append(groupoids[src] if isinstance(src, str) else _extract(doc, src, tol))
    return Composite(
        sides[0],
        sides[1],
        require_transitive=doc.composite.get("require_transitive", True),
        name=doc.composite.get("name", ""),
    )


# export


def _payload_json(p) -> Any:
    return p.to_strings() if isinstance(p, RationalMatrix3) else p.symbol


def _groupoid_json(G: FiniteGroupoid, name: str, objects: tuple[str, ...], ambient: str | None = None) -> dict:
    out: dict[str, Any] = {"name": name, "mode": G.mode.value}
    if G.objects != objects:
        out["objects"] = list(G.objects)
    if ambient:
        out["ambient"] = ambient
    out["arrows"] = [{"src": G.objects[a.src], "dst": G.objects[a.dst], "payload": _payload_json(a.payload)} for a in G.arrows]
    if G.mode is Mode.TABLE and not ambient:
        idx = {a: i for i, a in enumerate(G.arrows)}
        t = G.table
        out["tables"] = {
            "identity": {G.objects[x]: idx[t.identity[x]] for x in range(G.n_objects) if t.identity.get(x) in idx},
            "inverse": [idx[t.inverse[a]] for a in G.arrows],
            "compose": sorted(
                [idx[g], idx[h], idx[gh]]
                for (g, h), gh in t.compose.items()
                if g in idx and h in idx and gh in idx
            ),
        }
    return out


def export_composite(c: Composite, name: str | None = None) -> BodyDocument:
    """Body document describing ``c`` (declared groupoids only)."""
    H, V = c.horizontal, c.vertical
    objects = c.body
    if H is V or H == V and H.table is V.table:
        groupoids = [_groupoid_json(H, "omega1", objects)]
        comp = {"omega1": "omega1", "omega2": "omega1"}
    else:
        ambient = "omega1" if H.mode is Mode.TABLE else None
        groupoids = [_groupoid_json(H, "omega1", objects), _groupoid_json(V, "omega2", objects, ambient)]
        comp = {"omega1": "omega1", "omega2": "omega2"}
    nm = name if name is not None else c.name
    raw = {
        "schema_version": "1",
        "objects": list(objects),
        "groupoids": groupoids,
        "composite": {"name": nm, **comp} if nm else comp,
    }
    raw = _normalize(raw)
    return BodyDocument("1", raw["objects"], raw["groupoids"], [], raw["composite"], raw)


# arrows, squares, reports


def arrow_to_json(a: Arrow, objects: tuple[str, ...]) -> dict:
    return {"src": objects[a.src], "dst": objects[a.dst], "payload": _payload_json(a.payload)}


def square_to_json(sq: Square, objects: tuple[str, ...]) -> dict:
    return {k: arrow_to_json(getattr(sq, k), objects) for k in ("bottom", "top", "right", "left")}


_POINT_KEYS = {"point", "source", "target"}


def _value_json(key: str, v: Any, objects: tuple[str, ...]) -> Any:
    if isinstance(v, Arrow):
        return arrow_to_json(v, objects)
    if isinstance(v, Square):
        return square_to_json(v, objects)
    if key in _POINT_KEYS and isinstance(v, int):
        return objects[v]
    if isinstance(v, tuple) and all(isinstance(i, int) for i in v):
        return [objects[i] for i in v]
    return v


def flag_to_json(f: Flag, objects: tuple[str, ...]) -> dict:
    out: dict[str, Any] = {"status": f.status}
    if f.witness:
        out["witness"] = {k: _value_json(k, v, objects) for k, v in f.witness.items()}
    if f.counterexample is not None:
        out["counterexample"] = {k: _value_json(k, v, objects) for k, v in f.counterexample.items()}
    return out


def report_to_dict(r: UniformityReport, objects: tuple[str, ...]) -> dict:
    return {
        "schema_version": "1",
        "composite": r.name,
        "objects": list(objects),
        "sizes": dict(r.sizes),
        "flags": {k: flag_to_json(getattr(r, k), objects) for k in r.FLAG_FIELDS},
        "isotropy_inclusions": r.isotropy_inclusions,
        "proposition_crosschecks": [
            {"id": x.id, "lhs": x.lhs, "rhs": x.rhs, "relation": x.relation, "agree": x.agree}
            for x in r.proposition_crosschecks
        ],
        "metadata": dict(r.metadata),
    }


def report_to_json(r: UniformityReport, objects: tuple[str, ...], validate: bool = True) -> str:
    d = report_to_dict(r, objects)
    if validate:
        _validate(d, "report")
    return canonical_json(d)


def _short(v: Any) -> str:
    if isinstance(v, dict) and "payload" in v:
        p = v["payload"]
        ps = p if isinstance(p, str) else "[" + ",".join("[" + ",".join(row) + "]" for row in p) + "]"
        return f"{v['src']}->{v['dst']}:{ps}"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}={_short(x)}" for k, x in v.items()) + "}"
    if isinstance(v, list):
        return "(" + ",".join(map(str, v)) + ")"
    return str(v)


def report_to_text(r: UniformityReport, objects: tuple[str, ...]) -> str:
    d = report_to_dict(r, objects)
    lines = [f"composite: {d['composite'] or '-'}", f"points: {', '.join(objects)}"]
    lines.append("sizes: " + ", ".join(f"{k}={v}" for k, v in d["sizes"].items()))
    for k, f in d["flags"].items():
        lines.append(f"{k}: {'true' if f['status'] else 'false'}")
        if "counterexample" in f:
            for ck, cv in f["counterexample"].items():
                lines.append(f"    {ck}: {_short(cv)}")
    lines.append("isotropy inclusions:")
    for name, inc in d["isotropy_inclusions"].items():
        lines.append(f"    {name}: omega2<=omega1 {inc['vertical_in_horizontal']}, omega1<=omega2 {inc['horizontal_in_vertical']}")
    lines.append("cross-checks:")
    for x in d["proposition_crosschecks"]:
        mark = "agree" if x["agree"] else "DISAGREE"
        lines.append(f"    {x['id']}: {x['lhs']} {x['relation']} {x['rhs']} -> {mark}")
    for k, v in d["metadata"].items():
        lines.append(f"note {k}: {v}")
    return "\n".join(lines) + "\n"


def parse_partial_square(text: str, c: Composite) -> PartialSquare:
    """``{"bottom": arrow, ...}`` with any subset of the four sides."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    schema = {
        "type": "object",
        "additionalProperties": False,
        "properties": {k: load_schema("body")["$defs"]["arrow"] for k in ("bottom", "top", "right", "left")},
    }
    schema = {"$defs": load_schema("body")["$defs"], **schema}
    try:
        jsonschema.Draft202012Validator(schema).validate(data)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise SchemaError(f"{where}: {exc.message}") from None
    mode = c.horizontal.mode.value
    sides = {k: _arrow_from_json(v, list(c.body), mode) for k, v in data.items()}
    return PartialSquare(**sides)
