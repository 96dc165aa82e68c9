import json
from fractions import Fraction
from typing import Any

import jsonschema

from metric_invariants.core.errors import InvalidPointFileError

RATIONAL_PATTERN = r"^-?[0-9]+/[1-9][0-9]*$"

RATIONAL_SCHEMA = {"type": "string", "pattern": RATIONAL_PATTERN}


def fraction_to_json(value: Any) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def fraction_from_json(text: str) -> Fraction:
    return Fraction(text)


def validate_document(document: Any, schema: dict[str, Any], what: str) -> None:
    """Validate a decoded JSON document.

    Raises:
        InvalidPointFileError: wrapping the jsonschema error message.
    """
    try:
        jsonschema.validate(instance=document, schema=schema)
    except jsonschema.ValidationError as exc:
        raise InvalidPointFileError(f"invalid {what}: {exc.message}") from exc


def dump_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False)
