"""
Schematy JSON zadań i raportów.

The documents under ``flagprolong/schemas`` are generated from the pydantic
models by ``scripts/export_schemas.py`` and carry ``x-schema-version``.
"""

import json
from pathlib import Path
from typing import Any, Dict

from flagprolong.models.job import JobSpec
from flagprolong.models.report import SCHEMA_VERSION, Report

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "schemas"
SCHEMA_MODELS = {"jobspec": JobSpec, "report": Report}


def schema_document(name: str) -> Dict[str, Any]:
    """Current JSON schema of ``name`` ("jobspec" or "report") with its version."""
    if name not in SCHEMA_MODELS:
        raise ValueError(f"Unknown schema: {name}. Available: {list(SCHEMA_MODELS)}")
    document = SCHEMA_MODELS[name].model_json_schema()
    document["x-schema-version"] = SCHEMA_VERSION
    return document


def schema_path(name: str) -> Path:
    return SCHEMA_DIR / f"{name}.schema.json"


def load_shipped_schema(name: str) -> Dict[str, Any]:
    with open(schema_path(name), encoding="utf-8") as handle:
        return json.load(handle)


def dump_schema(document: Dict[str, Any]) -> str:
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


__all__ = [
    "SCHEMA_DIR",
    "SCHEMA_MODELS",
    "schema_document",
    "schema_path",
    "load_shipped_schema",
    "dump_schema",
]
