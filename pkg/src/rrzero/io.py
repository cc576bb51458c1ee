"""Group-description files.

A description file is JSON with a pinned ``version`` and three sections:

``group``
    the construction tree; every node has a ``kind`` and may carry an
    ``id`` and inline ``tags``
``declarations``
    tags attached to node ids, each with a free-text justification
``analysis``
    requested operations and their parameters

Nodes are validated against a JSON schema with unknown fields rejected,
then built into a :class:`~rrzero.groups.description.GroupDescription`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import jsonschema

from rrzero.algebra import ComplexRational, GroupAlgebraElement, MatrixOverGroupAlgebra
from rrzero.groups.abelian import FGAbelianGroup
from rrzero.groups.description import (
    TAG_NAMES,
    AbelianAtom,
    DeclaredAtom,
    DescriptionError,
    Extension,
    FiniteAtom,
    GroupDescription,
    IncreasingUnion,
    Semidirect,
    UnsupportedDescription,
)
from rrzero.groups.finite import FiniteGroupTable, GroupTableError
from rrzero.groups.semidirect import ActionError, SemidirectProductGroup
from rrzero.obstruction.analyze import AbelianizationWitness

FORMAT_VERSION = 1

OPERATIONS = ("analyze", "hirsch", "oscillation", "embed-audit", "series-normalize")

_int_list = {"type": "array", "items": {"type": "integer"}}
_matrix = {"type": "array", "items": _int_list}
_tags = {
    "type": "object",
    "propertyNames": {"enum": list(TAG_NAMES)},
    "additionalProperties": {"type": "boolean"},
}
_element = {
    "type": "object",
    "properties": {"free": _int_list, "torsion": _int_list},
    "required": ["free"],
    "additionalProperties": False,
}
_common = {"kind": {}, "id": {"type": "string"}, "tags": _tags}

_finite_spec = {
    "type": "object",
    "properties": {
        "cyclic": {"type": "integer", "minimum": 1},
        "abelian_factors": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "table": _matrix,
        "name": {"type": "string"},
    },
    "additionalProperties": False,
    "oneOf": [{"required": ["cyclic"]}, {"required": ["abelian_factors"]}, {"required": ["table"]}],
}

_action_props = {
    "action": {"type": "array", "items": _matrix},
    "generator_matrices": {"type": "array", "items": _matrix},
}


def _node_schema(kind: str, props: dict, required: list[str]) -> dict:
    return {
        "if": {"properties": {"kind": {"const": kind}}, "required": ["kind"]},
        "then": {
            "properties": {**_common, **props},
            "required": ["kind", *required],
            "additionalProperties": False,
        },
    }


SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "version": {"const": FORMAT_VERSION},
        "group": {"$ref": "#/$defs/node"},
        "declarations": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "node": {"type": "string"},
                    "flag": {"enum": list(TAG_NAMES)},
                    "value": {"type": "boolean"},
                    "justification": {"type": "string"},
                },
                "required": ["node", "flag", "value", "justification"],
                "additionalProperties": False,
            },
        },
        "analysis": {
            "type": "object",
            "properties": {
                "operations": {"type": "array", "items": {"enum": list(OPERATIONS)}},
                "parameters": {
                    "type": "object",
                    "properties": {
                        "grid": {"type": "integer", "minimum": 1},
                        "refine": {"type": "integer", "minimum": 0},
                        "components_cap": {"type": "integer", "minimum": 1},
                        "components": {"enum": ["auto", "enumerate", "sample"]},
                        "tol": {"type": "number", "exclusiveMinimum": 0},
                        "seed": {"type": "integer"},
                        "trials": {"type": "integer", "minimum": 1},
                    },
                    "additionalProperties": False,
                },
                "matrix": {
                    "type": "array",
                    "items": {"type": "array", "items": {"$ref": "#/$defs/algebra_element"}},
                },
                "series": {"type": "array", "items": {"enum": ["LF", "Ab"]}},
                "abelianization": {
                    "type": "object",
                    "properties": {
                        "target": {"$ref": "#/$defs/abelian_group"},
                        "image": _element,
                    },
                    "required": ["target", "image"],
                    "additionalProperties": False,
                },
                "reduction": {
                    "type": "object",
                    "properties": {
                        k: {"type": "string"} for k in ("lambda", "solvable_finite_index", "last_derived", "linear")
                    },
                    "additionalProperties": False,
                },
            },
            "additionalProperties": False,
        },
    },
    "required": ["version", "group"],
    "additionalProperties": False,
    "$defs": {
        "abelian_group": {
            "type": "object",
            "properties": {
                "free_rank": {"type": "integer", "minimum": 0},
                "torsion": {"type": "array", "items": {"type": "integer", "minimum": 2}},
                "cyclic_orders": {"type": "array", "items": {"type": "integer", "minimum": 1}},
            },
            "additionalProperties": False,
        },
        "algebra_element": {
            "type": "array",
            "items": {
                "type": "object",
                "properties": {
                    "element": _element,
                    "coefficient": {
                        "oneOf": [
                            {"type": ["string", "integer"]},
                            {"type": "array", "items": {"type": ["string", "integer"]}, "minItems": 2, "maxItems": 2},
                        ]
                    },
                },
                "required": ["element", "coefficient"],
                "additionalProperties": False,
            },
        },
        "node": {
            "type": "object",
            "properties": {
                "kind": {"enum": ["abelian", "finite", "semidirect", "declared", "extension", "union"]},
            },
            "required": ["kind"],
            "allOf": [
                _node_schema(
                    "abelian",
                    {
                        "free_rank": {"type": "integer", "minimum": 0},
                        "torsion": {"type": "array", "items": {"type": "integer", "minimum": 2}},
                        "cyclic_orders": {"type": "array", "items": {"type": "integer", "minimum": 1}},
                    },
                    [],
                ),
                _node_schema("finite", {"spec": _finite_spec}, ["spec"]),
                _node_schema(
                    "semidirect",
                    {"rank": {"type": "integer", "minimum": 0}, "acting": _finite_spec, **_action_props},
                    ["rank", "acting"],
                ),
                _node_schema(
                    "declared",
                    {
                        "name": {"type": "string"},
                        "hirsch": {"oneOf": [{"type": "integer", "minimum": 0}, {"const": "inf"}]},
                    },
                    ["name"],
                ),
                _node_schema(
                    "extension",
                    {
                        "normal": {"$ref": "#/$defs/node"},
                        "quotient": {"$ref": "#/$defs/node"},
                        "realization": {
                            "type": "object",
                            "properties": _action_props,
                            "additionalProperties": False,
                        },
                    },
                    ["normal", "quotient"],
                ),
                _node_schema(
                    "union",
                    {
                        "stages": {"type": "array", "items": {"$ref": "#/$defs/node"}, "minItems": 1},
                        "connecting": {"type": "array", "items": _matrix},
                        "extrapolate": {"enum": ["stable", "unbounded"]},
                        "stage_tags": _tags,
                    },
                    ["stages"],
                ),
            ],
        },
    },
}


class DescriptionFileError(ValueError):
    """Schema or semantic error in a description file, with a location."""

    def __init__(self, location: str, message: str):
        super().__init__(f"{location}: {message}")
        self.location = location
        self.message = message


@dataclass
class ParsedDescription:
    group: GroupDescription
    operations: list[str]
    parameters: dict[str, Any]
    declarations: list[dict] = field(default_factory=list)
    matrix: list | None = None
    series: list[str] | None = None
    abelianization: AbelianizationWitness | None = None
    reduction: dict[str, str] | None = None
    node_ids: dict[str, str] = field(default_factory=dict)
    raw: dict = field(default_factory=dict)


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path) if path else "/"


def _line_of(text: str, path) -> int | None:
    """Best-effort line number of the last object key on ``path``."""
    pos = 0
    for part in path:
        if isinstance(part, str):
            hit = text.find(json.dumps(part), pos)
            if hit < 0:
                return None
            pos = hit
    return text.count("\n", 0, pos) + 1


def validate_document(doc: Any, text: str = "") -> None:
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if not errors:
        return
    # the deepest error is usually the informative one in nested oneOf/allOf trees
    err = max(errors, key=lambda e: len(e.absolute_path))
    where = _pointer(err.absolute_path)
    line = _line_of(text, list(err.absolute_path)) if text else None
    raise DescriptionFileError(f"{where}" + (f" (line {line})" if line else ""), err.message)


def _finite_table(spec: dict) -> FiniteGroupTable:
    if "cyclic" in spec:
        return FiniteGroupTable.cyclic(spec["cyclic"])
    if "abelian_factors" in spec:
        return FiniteGroupTable.abelian(tuple(spec["abelian_factors"]))
    return FiniteGroupTable(spec["table"], spec.get("name", "table"))


def _acting_orders(acting: dict) -> tuple[int, ...] | None:
    if "cyclic" in acting:
        return (acting["cyclic"],)
    if "abelian_factors" in acting:
        return tuple(acting["abelian_factors"])
    return None


def _semidirect(rank: int, acting: dict, spec: dict, where: str) -> SemidirectProductGroup:
    table = _finite_table(acting)
    if "action" in spec:
        return SemidirectProductGroup(rank, table, spec["action"])
    if "generator_matrices" in spec:
        orders = _acting_orders(acting)
        if orders is None:
            raise DescriptionFileError(where, "generator_matrices need the acting group given by cyclic or abelian_factors")
        return SemidirectProductGroup.from_generator_action(rank, orders, spec["generator_matrices"])
    raise DescriptionFileError(where, "semidirect product needs an action or generator_matrices")


def _abelian_group(spec: dict) -> FGAbelianGroup:
    if "cyclic_orders" in spec:
        if "torsion" in spec:
            raise DescriptionError("give either torsion or cyclic_orders, not both")
        return FGAbelianGroup.from_cyclic(spec.get("free_rank", 0), tuple(spec["cyclic_orders"]))
    return FGAbelianGroup(spec.get("free_rank", 0), tuple(spec.get("torsion", ())))


class _Builder:
    def __init__(self, declared: dict[str, dict[str, bool]]):
        self.declared = declared
        self.ids: dict[str, str] = {}

    def tags(self, node: dict, where: str) -> dict[str, bool]:
        out = dict(node.get("tags", {}))
        nid = node.get("id")
        if nid is not None:
            for flag, value in self.declared.get(nid, {}).items():
                if out.get(flag, value) != value:
                    raise DescriptionFileError(where, f"declaration {nid}:{flag} contradicts the inline tag")
                out[flag] = value
        return out

    def build(self, node: dict, where: str, tree_path: str) -> GroupDescription:
        nid = node.get("id")
        if nid is not None:
            if nid in self.ids:
                raise DescriptionFileError(where, f"duplicate node id {nid!r}")
            self.ids[nid] = tree_path
        tags = self.tags(node, where)
        kind = node["kind"]
        try:
            if kind == "abelian":
                return AbelianAtom(_abelian_group(node), tags)
            if kind == "finite":
                return FiniteAtom(_finite_table(node["spec"]), tags)
            if kind == "semidirect":
                return Semidirect(_semidirect(node["rank"], node["acting"], node, where), tags)
            if kind == "declared":
                h = node.get("hirsch")
                return DeclaredAtom(node["name"], tags, math.inf if h == "inf" else h)
            if kind == "extension":
                normal = self.build(node["normal"], f"{where}/normal", f"{tree_path}.normal")
                quotient = self.build(node["quotient"], f"{where}/quotient", f"{tree_path}.quotient")
                real = None
                if "realization" in node:
                    if not (isinstance(normal, AbelianAtom) and node["quotient"]["kind"] == "finite"):
                        raise UnsupportedDescription(
                            "a realization needs a free abelian normal subgroup and a finite quotient"
                        )
                    real = _semidirect(
                        normal.group.free_rank, node["quotient"]["spec"], node["realization"], where
                    )
                return Extension(normal, quotient, real, tags)
            if kind == "union":
                stages = tuple(
                    self.build(s, f"{where}/stages/{i}", f"{tree_path}.stages[{i}]")
                    for i, s in enumerate(node["stages"])
                )
                return IncreasingUnion(
                    stages,
                    node.get("connecting"),
                    node.get("extrapolate", "stable"),
                    node.get("stage_tags", {}),
                    tags,
                )
        except (DescriptionError, GroupTableError, ActionError) as exc:
            raise DescriptionFileError(where, str(exc)) from exc
        except ValueError as exc:
            if isinstance(exc, (UnsupportedDescription, DescriptionFileError)):
                raise
            raise DescriptionFileError(where, str(exc)) from exc
        raise UnsupportedDescription(f"{where}: unknown node kind {kind!r}")


def _collect_ids(node: dict, out: set[str]) -> None:
    if "id" in node:
        out.add(node["id"])
    for key in ("normal", "quotient"):
        if key in node:
            _collect_ids(node[key], out)
    for s in node.get("stages", ()):
        _collect_ids(s, out)


def load_document(doc: dict, text: str = "") -> ParsedDescription:
    validate_document(doc, text)
    declared: dict[str, dict[str, bool]] = {}
    known: set[str] = set()
    _collect_ids(doc["group"], known)
    for i, dec in enumerate(doc.get("declarations", [])):
        if dec["node"] not in known:
            raise DescriptionFileError(f"/declarations/{i}/node", f"no node with id {dec['node']!r}")
        slot = declared.setdefault(dec["node"], {})
        if slot.get(dec["flag"], dec["value"]) != dec["value"]:
            raise DescriptionFileError(f"/declarations/{i}", "conflicting declarations")
        slot[dec["flag"]] = dec["value"]
    builder = _Builder(declared)
    group = builder.build(doc["group"], "/group", "root")
    analysis = doc.get("analysis", {})
    ab = None
    if "abelianization" in analysis:
        spec = analysis["abelianization"]
        target = _abelian_group(spec["target"])
        img = spec["image"]
        try:
            image = target.element(tuple(img["free"]), tuple(img.get("torsion", ())))
        except ValueError as exc:
            raise DescriptionFileError("/analysis/abelianization/image", str(exc)) from exc
        ab = AbelianizationWitness(target, image)
    return ParsedDescription(
        group=group,
        operations=list(analysis.get("operations", [])),
        parameters=dict(analysis.get("parameters", {})),
        declarations=list(doc.get("declarations", [])),
        matrix=analysis.get("matrix"),
        series=analysis.get("series"),
        abelianization=ab,
        reduction=analysis.get("reduction"),
        node_ids=builder.ids,
        raw=doc,
    )


def parse_description(path: str | Path) -> ParsedDescription:
    """Read, validate and build a description file."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptionFileError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from exc
    return load_document(doc, text)


def matrix_from_json(group, rows) -> MatrixOverGroupAlgebra:
    """Build a matrix over C[group] from lists of {element, coefficient} terms."""

    def coeff(c):
        if isinstance(c, list):
            return ComplexRational(c[0], c[1])
        return ComplexRational.of(c)

    def entry(terms):
        coeffs = {}
        for t in terms:
            e = t["element"]
            g = group.element(tuple(e["free"]), tuple(e.get("torsion", ())))
            coeffs[g] = coeffs.get(g, ComplexRational.of(0)) + coeff(t["coefficient"])
        return GroupAlgebraElement(group, coeffs)

    return MatrixOverGroupAlgebra(group, [[entry(x) for x in row] for row in rows])


__all__ = [
    "FORMAT_VERSION",
    "OPERATIONS",
    "SCHEMA",
    "DescriptionFileError",
    "ParsedDescription",
    "load_document",
    "matrix_from_json",
    "parse_description",
    "validate_document",
]
