"""Versioned JSON schemas for elements, functionals, tensors, JB*-algebras and reports."""

from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path

import jsonschema

SCHEMA_VERSION = "1"
_DIR = Path(__file__).parent


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    return json.loads((_DIR / f"{name}.v{SCHEMA_VERSION}.json").read_text())


def validate_document(doc, name: str) -> None:
    """Raise ``ValueError`` if ``doc`` does not match schema ``name``."""
    try:
        jsonschema.validate(doc, load_schema(name))
    except jsonschema.ValidationError as exc:
        raise ValueError(f"{name} document invalid: {exc.message}") from exc
