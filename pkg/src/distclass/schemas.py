"""JSON schemas for everything the CLI writes."""

from __future__ import annotations

import jsonschema

_POINT = {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}
_POINTS = {"type": "array", "items": _POINT}

CATALOG = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["id", "points", "d"],
        "properties": {
            "id": {"type": "integer", "minimum": 1},
            "points": {**_POINTS, "minItems": 5, "maxItems": 5},
            "d": {"type": "number", "exclusiveMinimum": 0},
            "constants": {"type": "object"},
        },
    },
}

CANDIDATES = {
    "type": "object",
    "required": ["seed", "groups"],
    "properties": {
        "seed": {"type": "integer"},
        "groups": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["nd", "points"],
                "properties": {"nd": {"type": "number"}, "points": _POINTS},
            },
        },
    },
}

CERTIFICATE = {
    "type": "object",
    "required": ["classes", "max_size", "runtime_ms"],
    "properties": {
        "classes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["size", "representative", "seeds"],
                "properties": {
                    "size": {"type": "integer"},
                    "representative": _POINTS,
                    "seeds": {"type": "array", "items": {"type": "integer"}},
                },
            },
        },
        "max_size": {"type": "integer"},
        "runtime_ms": {"type": "number"},
    },
}

GRAPH_LEDGER = {
    "type": "object",
    "required": ["n", "amax", "exhaustive", "count", "passed", "graphs"],
    "properties": {
        "n": {"type": "integer"},
        "amax": {"type": "integer"},
        "exhaustive": {"type": "boolean"},
        "count": {"type": "integer"},
        "passed": {"type": "integer"},
        "graphs": {"type": "array"},
    },
}

MANIFEST = {
    "type": "object",
    "required": ["command", "parameters", "version", "wall_clock_s", "outcome", "digests"],
}

TABLE2_DIFF = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["seed", "strict_match", "orbit_match", "discrepancies"],
    },
}


def validate(obj, schema) -> None:
    jsonschema.validate(obj, schema)
