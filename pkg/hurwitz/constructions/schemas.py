from typing import Any

from cerberus import SchemaError, Validator

from hurwitz.exceptions import ValidationError

_rational = {"type": ["integer", "string"], "regex": r"^-?[0-9]+(/[0-9]+)?$"}

schedule_overrides_schema = {
    "mode": {"type": "string", "allowed": ["strict", "desk"]},
    "epsilon": {**_rational},
    "m": {"type": "integer", "min": 2},
    "n": {
        "type": "list",
        "minlength": 1,
        "schema": {"type": ["integer", "string"], "regex": r"^[0-9]+$"},
    },
    "q": {"type": "list", "schema": {**_rational}},
    "family_cap": {"type": "integer", "min": 1, "nullable": True},
    "c1": {**_rational, "nullable": True},
}

manifest_schema = {
    "kind": {"type": "string", "allowed": ["small-o", "tau"], "required": True},
    "version": {"type": "string", "required": True},
    "created_at": {"type": "string", "required": True},
    "rate": {"type": "string", "required": True},
    "seed": {"type": "integer", "required": True},
    "depth": {"type": "integer", "min": 1, "required": True},
    "schedule": {"type": "dict", "required": True},
    "family_sizes": {"type": "list", "schema": {"type": "integer", "min": 0}},
    "assertions": {"type": "list", "schema": {"type": "dict"}},
    "deviations": {"type": "list", "schema": {"type": "string"}},
    "config": {"type": "dict"},
    "references": {"type": "dict"},
    "measure": {"type": "dict"},
}


def validate_document(schema: dict, document: Any, allow_unknown: bool = False) -> dict:
    try:
        v = Validator(schema, allow_unknown=allow_unknown)
        if not isinstance(document, dict) or not v.validate(document):
            errors = v.errors if isinstance(document, dict) else "expected a JSON object"
            raise ValidationError(document, errors)
    except SchemaError as exc:
        raise ValidationError(document, str(exc))
    return v.document
