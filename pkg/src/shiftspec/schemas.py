"""JSON schemas for CLI reports and input files."""

import jsonschema

__all__ = ["FUNCTION_SPEC_SCHEMA", "REPORT_SCHEMA", "RESULT_SCHEMAS", "validate_report",
           "validate_function_spec"]

_number = {"type": "number"}
_complex = {"type": "array", "items": _number, "minItems": 2, "maxItems": 2}
_scalar = {"oneOf": [_number, _complex]}
_interval = {"type": "array", "items": _number, "minItems": 2, "maxItems": 2}
_intervals = {"type": "array", "items": _interval}
_matrix = {"type": "array", "items": {"type": "array", "items": _complex}}

FUNCTION_SPEC_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "oneOf": [
        {
            "properties": {
                "kind": {"const": "piecewise"},
                "breakpoints": {"type": "array", "items": _number, "minItems": 2},
                "values": {"type": "array", "items": _scalar, "minItems": 1},
            },
            "required": ["kind", "breakpoints", "values"],
            "additionalProperties": False,
        },
        {
            "properties": {
                "kind": {"const": "samples"},
                "domain": {"enum": ["time", "frequency"]},
                "start": _number,
                "step": {"type": "number", "exclusiveMinimum": 0},
                "values": {"type": "array", "items": _scalar, "minItems": 1},
            },
            "required": ["kind", "start", "step", "values"],
            "additionalProperties": False,
        },
        {
            "properties": {
                "kind": {"const": "builtin"},
                "name": {"type": "string"},
            },
            "required": ["kind", "name"],
            "additionalProperties": False,
        },
    ],
}

_frame = {
    "type": "object",
    "required": ["verdict", "A", "B", "support_mass", "tol"],
    "properties": {
        "verdict": {"enum": ["ONB", "PARSEVAL", "RIESZ", "FRAME", "BESSEL", "NONE"]},
        "A": {"type": "number", "minimum": 0},
        "B": _number,
        "support_mass": {"type": "number", "minimum": 0, "maximum": 1},
        "tol": _number,
        "properties": {"type": "array", "items": {"type": "string"}},
    },
}

RESULT_SCHEMAS = {
    "density": {
        "type": "object",
        "required": ["n_grid", "tail_bound", "integral", "norm2", "min", "max"],
        "properties": {"n_grid": {"type": "integer"}, "tail_bound": {"type": "number", "minimum": 0}},
    },
    "classify": _frame,
    "renormalize": {
        "type": "object",
        "required": ["support", "support_mass", "max_deviation_from_indicator"],
        "properties": {"support": _intervals},
    },
    "depend": {
        "type": "object",
        "required": ["dependent", "zero_set"],
        "properties": {
            "dependent": {"type": "boolean"},
            "zero_set": _intervals,
            "k_max": {"type": "integer"},
            "coefficient_norm": _number,
            "residual": _number,
            "relative_residual": _number,
            "density_side_norm": _number,
        },
    },
    "matrix": {
        "type": "object",
        "required": ["n_family", "gram_integral", "gram_direct", "max_gram_deviation",
                     "min_eigenvalue", "multiplicity_histogram", "supports"],
        "properties": {"gram_integral": _matrix, "gram_direct": _matrix},
    },
    "wavelet": {
        "type": "object",
        "required": ["k", "form", "consistency_defect", "qmf_max_defect", "qmf_lowpass_defect",
                     "father_frame", "mother_frame"],
        "properties": {"father_frame": _frame, "mother_frame": _frame},
    },
    "simulate": {
        "type": "object",
        "required": ["kind", "m_paths", "n_times", "mean_abs_max"],
    },
    "kl": {
        "type": "object",
        "required": ["n_grid", "modes", "eigenvalues", "trace_defect", "reconstruction"],
        "properties": {
            "eigenvalues": {"type": "array", "items": _number},
            "reconstruction": {
                "type": "array",
                "items": {"type": "object",
                          "required": ["n_modes", "empirical", "predicted"]},
            },
        },
    },
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["command", "version", "parameters", "defaults", "result", "outputs"],
    "properties": {
        "command": {"enum": sorted(RESULT_SCHEMAS)},
        "version": {"type": "string"},
        "parameters": {"type": "object"},
        "defaults": {"type": "object"},
        "result": {"type": "object"},
        "outputs": {"type": "array", "items": {"type": "string"}},
    },
    "additionalProperties": False,
}


def validate_function_spec(doc):
    jsonschema.validate(doc, FUNCTION_SPEC_SCHEMA)


def validate_report(doc):
    """Raise ``jsonschema.ValidationError`` unless ``doc`` is a well-formed report."""
    jsonschema.validate(doc, REPORT_SCHEMA)
    jsonschema.validate(doc["result"], RESULT_SCHEMAS[doc["command"]])
