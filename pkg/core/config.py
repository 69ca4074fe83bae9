"""
Configuration settings for the leibniz-hnn toolkit.

Every tunable lives here as a module constant. User-level overrides are read
by ``core.settings_manager`` and command-line flags override both.
"""

import os
from pathlib import Path
from typing import Final

# Field Configuration
DEFAULT_FIELD: Final[str] = "gfp:5"  # exhaustive searches avoid char 2/3
RATIONAL_FIELD_NAME: Final[str] = "Q"
RATIONAL_LINE_COEFFICIENTS: Final[tuple[int, ...]] = (-1, 0, 1)

# Free algebra Configuration
FREE_DEGREE_CAP: Final[int] = 6
GENERATOR_PREFIX: Final[str] = "x"
STABLE_LETTER_NAME: Final[str] = "t"

# Truncated quotient Configuration
DEFAULT_DEGREE: Final[int] = 4
MAX_DEGREE: Final[int] = 6  # beyond this requires --force
MIN_DEGREE: Final[int] = 1

# Equation solving Configuration
DEFAULT_BUDGET: Final[int] = 10**6
DEFAULT_WORKERS: Final[int] = 1
MAX_WORKERS: Final[int] = 32

# Property sampling Configuration
DEFAULT_SEED: Final[int] = 0
RANDOM_TRIPLES: Final[int] = 100
RANDOM_COEFFICIENT_BOUND: Final[int] = 3

# Report Configuration
SCHEMA_VERSION: Final[str] = "1.0"
JSON_INDENT: Final[int] = 2
OUTPUT_FORMATS: Final[tuple[str, ...]] = ("json", "text")

# Logging Configuration
LOG_LEVEL: Final[str] = "WARNING"
LOG_FORMAT: Final[str] = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Paths
PROJECT_ROOT: Final[Path] = Path(__file__).resolve().parent.parent
FIXTURES_DIR: Final[Path] = PROJECT_ROOT / "fixtures"
SETTINGS_ENV_VAR: Final[str] = "LEIBNIZ_HNN_SETTINGS"


def get_data_dir() -> Path:
    """Get the per-user data directory (not created on read)."""
    return Path(os.environ.get("LEIBNIZ_HNN_HOME", Path.home() / ".leibniz_hnn"))
