#!/usr/bin/env python3
"""
Eksport schematów JSON zadania i raportu.

Regenerates ``flagprolong/schemas/*.schema.json`` from the pydantic models.
Run it after changing JobSpec or Report and bump SCHEMA_VERSION when the
change is not backwards compatible.

Użycie:
    python scripts/export_schemas.py               # oba schematy
    python scripts/export_schemas.py --check       # tylko porównanie
"""

import argparse
import logging
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", ".."))

from flagprolong.models.schemas import (  # noqa: E402
    SCHEMA_MODELS,
    dump_schema,
    schema_document,
    schema_path,
)


def setup_logging():
    """Skonfiguruj logowanie."""
    logging.basicConfig(level=logging.INFO, format="%(asctime)s - %(levelname)s - %(message)s")


def main():
    """Główna funkcja skryptu."""
    parser = argparse.ArgumentParser(description="Eksport schematów JSON flagprolong")
    parser.add_argument(
        "--check", action="store_true", help="Nie zapisuj, zgłoś różnice z plikami w repo"
    )
    args = parser.parse_args()

    setup_logging()

    stale = []
    for name in SCHEMA_MODELS:
        path = schema_path(name)
        text = dump_schema(schema_document(name))
        current = path.read_text(encoding="utf-8") if path.exists() else None
        if current == text:
            logging.info("%s aktualny", path)
            continue
        if args.check:
            stale.append(name)
            continue
        path.write_text(text, encoding="utf-8")
        logging.info("Zapisano %s", path)

    if stale:
        print(f"❌ Nieaktualne schematy: {', '.join(stale)}")
        sys.exit(1)
    print("✅ Schematy aktualne")


if __name__ == "__main__":
    main()
