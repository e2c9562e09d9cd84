import importlib
import os
from fractions import Fraction
from typing import TYPE_CHECKING

from dotenv import load_dotenv

# Load .env into the environment before reading variables
load_dotenv()

# Base defaults from environment
PROFILE = os.getenv("FLAGPROLONG_PROFILE", "thorough")
DEFAULT_MAX_DEGREE = int(os.getenv("FLAGPROLONG_MAX_DEGREE", "20"))
LOG_LEVEL = os.getenv("FLAGPROLONG_LOG_LEVEL", "INFO").upper()
LOG_FILE = os.getenv("FLAGPROLONG_LOG_FILE", "")


def _load_profile_config():
    """Import the profile module and copy its UPPERCASE constants into this module.

    Using importlib keeps every import at the top of the file (flake8 E402)
    while the profile stays selectable through the environment.
    """
    module_name = "flagprolong.config_fast" if PROFILE == "fast" else "flagprolong.config_thorough"
    # reload so environment overrides are re-read after importlib.reload(config)
    _profile = importlib.reload(importlib.import_module(module_name))
    for _name in dir(_profile):
        if _name.isupper():
            globals()[_name] = getattr(_profile, _name)


_load_profile_config()

if TYPE_CHECKING:  # pragma: no cover - type checking aid only
    from flagprolong.config_thorough import (
        JACOBI_MAX_DIM as JACOBI_MAX_DIM,
        SAMPLE_STEP as SAMPLE_STEP,
        VERIFY_DETERMINACY as VERIFY_DETERMINACY,
    )

__all__ = [
    "PROFILE",
    "DEFAULT_MAX_DEGREE",
    "LOG_LEVEL",
    "LOG_FILE",
    # profile constants below
    "JACOBI_MAX_DIM",
    "VERIFY_DETERMINACY",
    "SAMPLE_STEP",
]

# Module-level defaults for static analyzers; overwritten by _load_profile_config().
JACOBI_MAX_DIM: int = int(globals().get("JACOBI_MAX_DIM", 40))
VERIFY_DETERMINACY: bool = globals().get("VERIFY_DETERMINACY", True)
SAMPLE_STEP: Fraction = globals().get("SAMPLE_STEP", Fraction(1, 7))
