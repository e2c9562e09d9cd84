# Ładowanie zmiennych środowiskowych z .env.test
import json
import os

import pytest
from dotenv import load_dotenv

load_dotenv(dotenv_path=os.path.join(os.path.dirname(__file__), "../.env.test"))

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture(scope="session")
def _env_loaded():
    """Fixture that ensures .env.test is loaded for the whole test session."""
    return True


@pytest.fixture
def load_fixture():
    """Read a JSON fixture by path relative to tests/fixtures."""

    def _load(name):
        with open(os.path.join(FIXTURES, name), encoding="utf-8") as handle:
            return json.load(handle)

    return _load
