"""Reading and writing instance files (one JSON document per instance)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import jsonschema

from .conditions import Grid
from .errors import FixpointError
from .maps import ExprMap, TableMap
from .solver import DEFAULT_MAX_ITER, DEFAULT_TOL
from .spaces import FiniteOrderedMetricSpace, RealVectorSpace

_NUMBER = {"type": "number"}
_LABEL = {"type": "string"}
_VECTOR = {"type": "array", "items": _NUMBER, "minItems": 1}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["space", "map"],
    "additionalProperties": False,
    "properties": {
        "space": {
            "type": "object",
            "minProperties": 1,
            "maxProperties": 1,
            "additionalProperties": False,
            "properties": {
                "finite": {
                    "type": "object",
                    "required": ["elements", "distance", "order_pairs"],
                    "additionalProperties": False,
                    "properties": {
                        "elements": {"type": "array", "items": _LABEL, "minItems": 1},
                        "distance": {"type": "array", "items": {"type": "array", "items": _NUMBER}},
                        "order_pairs": {
                            "type": "array",
                            "items": {"type": "array", "items": _LABEL, "minItems": 2, "maxItems": 2},
                        },
                    },
                },
                "real_vector": {
                    "type": "object",
                    "required": ["dimension"],
                    "additionalProperties": False,
                    "properties": {
                        "dimension": {"type": "integer", "minimum": 1},
                        "metric": {"enum": ["L1", "L2", "LInf"]},
                        "domain_box": {
                            "type": "array",
                            "items": {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2},
                        },
                    },
                },
            },
        },
        "map": {
            "type": "object",
            "minProperties": 1,
            "maxProperties": 1,
            "additionalProperties": False,
            "properties": {
                "table": {
                    "type": "array",
                    "items": {"type": "array", "items": _LABEL, "minItems": 3, "maxItems": 3},
                },
                "components": {"type": "array", "items": {"type": "string"}, "minItems": 1},
            },
        },
        "start": {
            "type": "object",
            "required": ["x0", "y0"],
            "additionalProperties": False,
            "properties": {
                "x0": {"oneOf": [_LABEL, _VECTOR]},
                "y0": {"oneOf": [_LABEL, _VECTOR]},
            },
        },
        "solver": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "tol": {"type": "number", "exclusiveMinimum": 0},
                "max_iter": {"type": "integer", "minimum": 1},
            },
        },
        "grid": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "points_per_axis": {"type": "integer", "minimum": 1},
                "max_checks": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": 0},
            },
        },
    },
}


class InstanceFormatError(FixpointError):
    """The document is not a well-formed instance file."""


@dataclass(frozen=True)
class Instance:
    space: object
    map: object
    start: Optional[tuple] = None
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    grid: Optional[Grid] = None

    @property
    def backend(self) -> str:
        return self.space.backend

    def to_dict(self):
        d = {"space": self.space.to_dict(), "map": self.map.to_dict()}
        if self.start is not None:
            x0, y0 = self.start
            d["start"] = {"x0": _plain(x0), "y0": _plain(y0)}
        if (self.tol, self.max_iter) != (DEFAULT_TOL, DEFAULT_MAX_ITER):
            d["solver"] = {"tol": self.tol, "max_iter": self.max_iter}
        if self.grid is not None:
            d["grid"] = {
                "points_per_axis": self.grid.points_per_axis,
                "max_checks": self.grid.max_checks,
                "seed": self.grid.seed,
            }
        return d


def _plain(p):
    return list(p) if isinstance(p, tuple) else p


def parse_instance(doc) -> Instance:
    """Build an :class:`Instance` from an already-decoded JSON document.

    Schema problems and structurally impossible spaces or maps raise
    :class:`InstanceFormatError`. Axiom violations (triangle inequality,
    missing reflexive pairs, incomplete tables) are left for the validators.
    """
    errors = sorted(
        jsonschema.Draft202012Validator(SCHEMA).iter_errors(doc), key=lambda e: list(e.path)
    )
    if errors:
        lines = []
        for err in errors:
            path = "/".join(str(p) for p in err.path) or "<root>"
            lines.append(f"{path}: {err.message}")
        raise InstanceFormatError("; ".join(lines))

    try:
        (kind, body), = doc["space"].items()
        if kind == "finite":
            space = FiniteOrderedMetricSpace(
                body["elements"], body["distance"], [tuple(p) for p in body["order_pairs"]]
            )
        else:
            box = body.get("domain_box")
            space = RealVectorSpace(
                body["dimension"],
                body.get("metric", "L2"),
                None if box is None else tuple(tuple(iv) for iv in box),
            )
        (mkind, mbody), = doc["map"].items()
        if (mkind == "table") != (space.backend == "finite"):
            raise InstanceFormatError(f"map kind {mkind!r} does not match the {space.backend} space")
        if mkind == "table":
            F = TableMap(tuple(t) for t in mbody)
        else:
            F = ExprMap.from_strings(mbody, space.dimension)
    except InstanceFormatError:
        raise
    except (FixpointError, ValueError) as exc:
        raise InstanceFormatError(str(exc)) from exc

    start = None
    if "start" in doc:
        start = tuple(_as_point(doc["start"][k], space) for k in ("x0", "y0"))
    solver = doc.get("solver", {})
    grid = None
    if "grid" in doc:
        grid = Grid(**doc["grid"])
    return Instance(
        space,
        F,
        start,
        float(solver.get("tol", DEFAULT_TOL)),
        int(solver.get("max_iter", DEFAULT_MAX_ITER)),
        grid,
    )


def _as_point(raw, space):
    if space.backend == "finite":
        if not isinstance(raw, str):
            raise InstanceFormatError(f"start point {raw!r} must be a label")
    elif isinstance(raw, str):
        raise InstanceFormatError(f"start point {raw!r} must be a vector")
    try:
        return space.check_point(raw)
    except FixpointError as exc:
        raise InstanceFormatError(f"start point: {exc}") from exc


def load_instance(path) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"{path}: invalid JSON: {exc}") from exc
    return parse_instance(doc)


def dump_instance(instance: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance.to_dict(), fh, indent=2)
        fh.write("\n")
