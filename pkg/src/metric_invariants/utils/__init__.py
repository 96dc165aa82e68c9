from metric_invariants.utils.serialization import (
    dump_json,
    fraction_from_json,
    fraction_to_json,
    validate_document,
)

__all__ = [
    "dump_json",
    "fraction_from_json",
    "fraction_to_json",
    "validate_document",
]
