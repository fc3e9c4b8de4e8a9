"""Validated loading of complex and module JSON documents.

Structural problems are found with a JSON Schema; semantic ones (ragged
matrices, degrees outside the shape, mis-shaped differentials) by the
checks below.  Either way the error names the JSON path and the first
offending key.
"""

from __future__ import annotations

import json
import re

from jsonschema import Draft202012Validator

from .complexes import ChainComplex, shape_from_json
from .matrix import Matrix
from .modules import FPModule
from .rings import ring_from_json

INT = {"type": "integer"}
NAT = {"type": "integer", "minimum": 0}
DEGREE_KEY = "^-?[0-9]+$"

RING = {
    "anyOf": [
        {"type": "string", "pattern": "^(Int|Z|ZZ|Z/[0-9]+)$"},
        {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["Int", "IntMod", "IntInvert", "IntLocalAt"]},
                "n": {"type": "integer", "minimum": 2},
                "primes": {"type": "array", "items": {"type": "integer", "minimum": 2}},
                "p": {"type": "integer", "minimum": 2},
            },
            "additionalProperties": False,
            "allOf": [
                {"if": {"properties": {"kind": {"const": "IntMod"}}}, "then": {"required": ["n"]}},
                {"if": {"properties": {"kind": {"const": "IntInvert"}}}, "then": {"required": ["primes"]}},
                {"if": {"properties": {"kind": {"const": "IntLocalAt"}}}, "then": {"required": ["p"]}},
            ],
        },
    ]
}

ENTRY = {
    "anyOf": [
        INT,
        {"type": "array", "prefixItems": [INT, {"type": "integer", "minimum": 1}], "minItems": 2, "maxItems": 2},
    ]
}

MATRIX = {
    "type": "object",
    "required": ["rows", "cols"],
    "properties": {
        "rows": NAT,
        "cols": NAT,
        "entries": {"type": "array", "items": {"type": "array", "items": ENTRY}},
    },
    "additionalProperties": False,
}

MODULE_PROPS = {"free_rank": NAT, "generators": NAT, "relations": MATRIX}

MODULE = {"type": "object", "properties": MODULE_PROPS, "additionalProperties": False}

MODULE_DOC = {
    "type": "object",
    "required": ["ring"],
    "properties": {"ring": RING, **MODULE_PROPS},
    "additionalProperties": False,
}

SHAPE = {
    "type": "object",
    "required": ["kind"],
    "properties": {
        "kind": {"enum": ["bounded", "periodic"]},
        "min": INT,
        "max": INT,
        "period": {"type": "integer", "minimum": 1},
    },
    "additionalProperties": False,
    "allOf": [
        {"if": {"properties": {"kind": {"const": "bounded"}}}, "then": {"required": ["min", "max"]}},
        {"if": {"properties": {"kind": {"const": "periodic"}}}, "then": {"required": ["period"]}},
    ],
}

COMPLEX = {
    "type": "object",
    "required": ["ring", "shape"],
    "properties": {
        "ring": RING,
        "shape": SHAPE,
        "modules": {"type": "object", "propertyNames": {"pattern": DEGREE_KEY}, "additionalProperties": MODULE},
        "differentials": {"type": "object", "propertyNames": {"pattern": DEGREE_KEY}, "additionalProperties": MATRIX},
    },
    "additionalProperties": False,
}


class InvalidInput(ValueError):
    """Malformed input: ``path`` is a JSON path, ``key`` the first offending key."""

    def __init__(self, path: str, key, message: str, source: str | None = None):
        self.path, self.key, self.message, self.source = path, key, message, source
        where = f"{source}: " if source else ""
        super().__init__(f"{where}{path}: key {key!r}: {message}")


def _json_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


def _schema_error(err, source):
    while err.validator in ("anyOf", "oneOf") and err.context:
        # prefer a branch of the right JSON type, whose complaint is the informative one
        typed = [e for e in err.context if not (e.validator == "type" and not e.relative_path)]
        err = _first(typed or err.context)
    parts = list(err.absolute_path)
    key = parts[-1] if parts else None
    if err.validator == "required":
        m = re.match(r"'([^']*)' is a required property", err.message)
        key = m.group(1) if m else key
    elif err.validator == "additionalProperties":
        m = re.search(r"'([^']*)' was unexpected", err.message)
        key = m.group(1) if m else key
    elif err.validator == "propertyNames":
        key = err.instance
    return InvalidInput(_json_path(parts), key, err.message, source)


def _first(errors):
    return min(errors, key=lambda e: ([str(p) for p in e.absolute_path], e.validator != "required"))


def _check_schema(obj, schema, source):
    errors = list(Draft202012Validator(schema).iter_errors(obj))
    if errors:
        raise _schema_error(_first(errors), source)


def _ring(obj, source):
    try:
        return ring_from_json(obj)
    except (ValueError, TypeError) as exc:
        raise InvalidInput("$.ring", "ring", str(exc), source) from None


def _matrix(obj, ring, path, source, shape=None) -> Matrix:
    rows, cols = obj["rows"], obj["cols"]
    entries = obj.get("entries", [])
    if rows and cols and len(entries) != rows:
        raise InvalidInput(path + ".entries", "entries", f"expected {rows} rows, found {len(entries)}", source)
    for r, row in enumerate(entries):
        if len(row) != cols:
            raise InvalidInput(f"{path}.entries[{r}]", r, f"expected {cols} entries, found {len(row)}", source)
    if shape is not None and (rows, cols) != shape:
        raise InvalidInput(path, path.rsplit(".", 1)[-1], f"expected shape {shape}, found {(rows, cols)}", source)
    try:
        return Matrix.from_json(obj, ring)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(path, "entries", str(exc), source) from None


def _module(obj, ring, path, source) -> FPModule:
    has_free, has_gens = "free_rank" in obj, "generators" in obj
    if has_free == has_gens:
        key = "free_rank" if has_free else "generators"
        raise InvalidInput(path, key, "give exactly one of 'free_rank' or 'generators'", source)
    if has_free:
        if "relations" in obj:
            raise InvalidInput(path, "relations", "a free module takes no relations", source)
        return FPModule.free(ring, obj["free_rank"])
    g = obj["generators"]
    if "relations" not in obj:
        return FPModule.free(ring, g)
    rel = obj["relations"]
    if rel["rows"] != g and rel["cols"]:
        raise InvalidInput(path + ".relations", "rows", f"relations need {g} rows, found {rel['rows']}", source)
    if not rel["cols"]:
        return FPModule.free(ring, g)
    return FPModule(ring, g, _matrix(rel, ring, path + ".relations", source))


def complex_from_json(obj, source: str | None = None) -> ChainComplex:
    _check_schema(obj, COMPLEX, source)
    ring = _ring(obj["ring"], source)
    sh = obj["shape"]
    periodic = sh["kind"] == "periodic"
    if not periodic and sh["max"] < sh["min"] and (obj.get("modules") or obj.get("differentials")):
        raise InvalidInput("$.shape", "max", "empty degree range but modules are given", source)

    def allowed(i):
        return 0 <= i < sh["period"] if periodic else sh["min"] <= i <= sh["max"]

    mods = {}
    for k, v in obj.get("modules", {}).items():
        i = int(k)
        if not allowed(i):
            raise InvalidInput(f"$.modules.{k}", k, "degree outside the shape", source)
        mods[i] = _module(v, ring, f"$.modules.{k}", source)

    def rank(i):
        if periodic:
            i %= sh["period"]
        return mods[i].generators if i in mods else 0

    diffs = {}
    for k, v in obj.get("differentials", {}).items():
        i = int(k)
        if not allowed(i):
            raise InvalidInput(f"$.differentials.{k}", k, "degree outside the shape", source)
        diffs[i] = _matrix(v, ring, f"$.differentials.{k}", source, shape=(rank(i - 1), rank(i)))
    try:
        return ChainComplex(ring, shape_from_json(sh), mods, diffs)
    except ValueError as exc:
        raise InvalidInput("$", None, str(exc), source) from None


def module_from_json(obj, source: str | None = None) -> FPModule:
    _check_schema(obj, MODULE_DOC, source)
    ring = _ring(obj["ring"], source)
    return _module({k: v for k, v in obj.items() if k != "ring"}, ring, "$", source)


def is_module_document(obj) -> bool:
    return isinstance(obj, dict) and "shape" not in obj and ("free_rank" in obj or "generators" in obj)


def read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvalidInput("$", None, f"cannot read file: {exc.strerror}", path) from None
    except json.JSONDecodeError as exc:
        raise InvalidInput("$", None, f"not valid JSON (line {exc.lineno}, column {exc.colno}): {exc.msg}", path) from None


def load_complex(path: str) -> ChainComplex:
    return complex_from_json(read_json(path), path)


def load_module_or_complex(path: str):
    obj = read_json(path)
    if is_module_document(obj):
        return module_from_json(obj, path)
    return complex_from_json(obj, path)


def dumps(obj) -> str:
    """Stable JSON text: fixed field order as produced, compact separators."""
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)
