"""JSON schemas of the CLI summaries (draft 2020-12)."""

CONVERGE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["command", "config", "order_band", "results", "all_pass"],
    "properties": {
        "command": {"const": "converge"},
        "config": {"type": "object"},
        "order_band": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        "all_pass": {"type": "boolean"},
        "results": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["alpha", "levels", "errors", "orders", "passing", "pass"],
                "properties": {
                    "alpha": {"type": "number"},
                    "levels": {"type": "array", "items": {"type": "number"}},
                    "errors": {"type": "array", "items": {"type": ["number", "null"]}},
                    "orders": {"type": "array", "items": {"type": ["number", "null"]}},
                    "passing": {"type": "integer", "minimum": 0},
                    "pass": {"type": ["boolean", "null"]},
                    "failures": {"type": "array", "items": {"type": "string"}},
                },
            },
        },
    },
}

ENERGY_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["command", "config", "drift_tol", "results", "all_pass"],
    "properties": {
        "command": {"const": "energy"},
        "config": {"type": "object"},
        "drift_tol": {"type": "number"},
        "all_pass": {"type": "boolean"},
        "results": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["alpha", "times", "energies", "max_rel_drift", "pass"],
                "properties": {
                    "alpha": {"type": "number"},
                    "times": {"type": "array", "items": {"type": "number"}},
                    "energies": {"type": "array", "items": {"type": "number"}},
                    "max_rel_drift": {"type": "number"},
                    "pass": {"type": "boolean"},
                },
            },
        },
    },
}
