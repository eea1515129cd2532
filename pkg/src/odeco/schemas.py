"""JSON schemas for the on-disk document formats.

Every document the CLI reads or writes is validated against one of
these schemas.  Producers may add extra keys (schemas are open), but
the required core must be present and well-typed; consumers should
ignore keys they do not know.
"""

import json

import jsonschema

from .errors import DataError

__all__ = [
    "TENSOR_SCHEMA",
    "DECOMPOSITION_SCHEMA",
    "MATCH_REPORT_SCHEMA",
    "BOUND_REPORT_SCHEMA",
    "EXPERIMENT_REPORT_SCHEMA",
    "validate_document",
    "load_json",
    "dump_json",
]

_NUMBER = {"type": "number"}
_VECTOR = {"type": "array", "items": _NUMBER, "minItems": 1}

TENSOR_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "tensor",
    "type": "object",
    "required": ["order", "dim", "data"],
    "properties": {
        "order": {"type": "integer", "minimum": 2},
        "dim": {"type": "integer", "minimum": 1},
        "data": _VECTOR,
    },
}

_PAIR = {
    "type": "object",
    "required": ["value", "vector"],
    "properties": {"value": _NUMBER, "vector": _VECTOR},
}

DECOMPOSITION_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "decomposition",
    "type": "object",
    "required": ["pairs", "thetas", "residual"],
    "properties": {
        "pairs": {"type": "array", "items": _PAIR, "minItems": 1},
        "thetas": {
            "anyOf": [{"type": "null"}, {"type": "array", "items": _NUMBER}]
        },
        "residual": _NUMBER,
        "method": {"type": "string"},
        "order": {"type": "integer", "minimum": 2},
        "dim": {"type": "integer", "minimum": 1},
        "step_residuals": {"type": "array", "items": _NUMBER},
    },
}

MATCH_REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "match-report",
    "type": "object",
    "required": ["permutation", "signs", "value_errors", "vector_errors"],
    "properties": {
        "permutation": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        "signs": {"type": "array", "items": {"enum": [1, -1, 1.0, -1.0]}},
        "value_errors": _VECTOR,
        "vector_errors": _VECTOR,
        "strategy": {"type": "string"},
    },
}

BOUND_REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "bound-report",
    "type": "object",
    "required": ["theorem", "admissible", "flags", "per_component", "margins"],
    "properties": {
        "theorem": {"enum": ["rd", "cd", "ada", "rank1"]},
        "admissible": {"type": "boolean"},
        "flags": {"type": "object", "additionalProperties": {"type": "boolean"}},
        "per_component": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["value_bound", "value_ok", "vector_bound", "vector_ok"],
                "properties": {
                    "value_bound": _NUMBER,
                    "value_ok": {"type": "boolean"},
                    "vector_bound": _NUMBER,
                    "vector_ok": {"type": "boolean"},
                },
            },
        },
        "margins": {
            "type": "object",
            "required": ["value", "vector"],
            "properties": {"value": _NUMBER, "vector": _NUMBER},
        },
        "passed": {"type": "boolean"},
        "notes": {"type": "array", "items": {"type": "string"}},
    },
}

EXPERIMENT_REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "experiment-report",
    "type": "object",
    "required": ["experiment_id", "instances", "master_seed", "records", "summary"],
    "properties": {
        "experiment_id": {"type": "string"},
        "instances": {"type": "integer", "minimum": 1},
        "master_seed": {"type": "integer", "minimum": 0},
        "solver": {"type": "object"},
        "records": {"type": "array", "items": {"type": "object"}},
        "summary": {"type": "object"},
    },
}

_SCHEMAS = {
    "tensor": TENSOR_SCHEMA,
    "decomposition": DECOMPOSITION_SCHEMA,
    "match-report": MATCH_REPORT_SCHEMA,
    "bound-report": BOUND_REPORT_SCHEMA,
    "experiment-report": EXPERIMENT_REPORT_SCHEMA,
}


def validate_document(doc, kind):
    """Validate a dict against the named schema; DataError on failure."""
    schema = _SCHEMAS.get(kind)
    if schema is None:
        raise ValueError(f"unknown document kind {kind!r}")
    try:
        jsonschema.validate(doc, schema)
    except jsonschema.ValidationError as exc:
        raise DataError(f"invalid {kind} document: {exc.message}") from exc
    return doc


def load_json(path, kind=None):
    """Read a JSON document, optionally validating it as ``kind``."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise DataError(f"{path}: expected a JSON object at top level")
    if kind is not None:
        validate_document(doc, kind)
    return doc


def dump_json(doc, path, kind=None):
    """Validate (optionally) and write a JSON document with full float
    precision."""
    if kind is not None:
        validate_document(doc, kind)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
