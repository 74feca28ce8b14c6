"""JSON Schemas (draft 2020-12) for every JSON document the package emits."""
from __future__ import annotations

RATIONAL = {"type": "string", "pattern": r"^-?\d+/[1-9]\d*$"}
_NAT = {"type": "integer", "minimum": 0}
_POS = {"type": "integer", "minimum": 1}
_COLOR = {"enum": ["R", "B"]}
_BOUNDS = {"type": "array", "items": _NAT, "minItems": 2}

AUDIT_REPORT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "AuditReport",
    "type": "object",
    "required": ["is_fair", "alpha", "topology", "groups", "intervals"],
    "additionalProperties": False,
    "properties": {
        "is_fair": {"type": "boolean"},
        "alpha": RATIONAL,
        "topology": {"enum": ["line", "circle"]},
        "groups": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["start", "len", "color", "unhappy"],
                "additionalProperties": False,
                "properties": {"start": _NAT, "len": _POS, "color": _COLOR, "unhappy": _POS},
            },
        },
        "intervals": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["start", "len", "majority", "unhappy", "allowable"],
                "additionalProperties": False,
                "properties": {
                    "start": _NAT,
                    "len": _POS,
                    "majority": _COLOR,
                    "unhappy": _NAT,
                    "allowable": {"type": "boolean"},
                },
            },
        },
    },
}

PARTITION = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Partition",
    "type": "object",
    "required": ["n", "boundaries"],
    "additionalProperties": False,
    "properties": {
        "n": _POS,
        "boundaries": _BOUNDS,
        "offset": _NAT,
        "alpha": RATIONAL,
        "non_allowable": {"type": "array", "items": _NAT},
    },
}

SOLVE_RESULT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "SolveResult",
    "type": "object",
    "required": ["feasible", "partition", "stats"],
    "additionalProperties": False,
    "properties": {
        "feasible": {"type": "boolean"},
        "partition": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["boundaries"],
                    "additionalProperties": False,
                    "properties": {"boundaries": _BOUNDS, "offset": _NAT},
                },
            ]
        },
        "stats": {
            "type": "object",
            "required": ["states", "fair4_calls", "elapsed_ms"],
            "additionalProperties": False,
            "properties": {
                "states": _NAT,
                "fair4_calls": _NAT,
                "elapsed_ms": {"type": "number", "minimum": 0},
            },
        },
    },
}

GENERATOR_META = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "GeneratorMeta",
    "type": "object",
    "required": ["kind", "n"],
    "properties": {
        "kind": {"enum": ["adversarial", "multi-sigma", "clustered", "mostly-clustered", "random"]},
        "n": _POS,
        "threshold_n0": {"anyOf": [RATIONAL, {"type": "null"}]},
        "realized_gamma": RATIONAL,
    },
}

ALL = {
    "audit": AUDIT_REPORT,
    "partition": PARTITION,
    "solve": SOLVE_RESULT,
    "meta": GENERATOR_META,
}
