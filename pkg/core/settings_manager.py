"""
Settings manager for the leibniz-hnn toolkit.

Loads optional user defaults (field, degree, budget, workers, format) from a
JSON file. Command-line flags override these, and these override the
constants in ``core.config``.
"""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

from .config import SETTINGS_ENV_VAR, get_data_dir

# Set up logging
logger = logging.getLogger(__name__)


class SettingsManager:
    """Read-only access to user defaults."""

    def __init__(self, settings_file: Optional[Path] = None):
        if settings_file is None:
            override = os.environ.get(SETTINGS_ENV_VAR)
            default = get_data_dir() / "settings.json"
            settings_file = Path(override) if override else default
        self.settings_file = settings_file
        self._settings: Dict[str, Any] = {}
        self._load_settings()

    def _load_settings(self) -> None:
        """Load settings from file."""
        try:
            if self.settings_file.exists():
                with open(self.settings_file, "r", encoding="utf-8") as f:
                    loaded = json.load(f)
                if not isinstance(loaded, dict):
                    raise ValueError("top-level value is not an object")
                self._settings = loaded
                logger.debug(f"Loaded settings from {self.settings_file}")
            else:
                logger.debug("No settings file found, using built-in defaults")
        except Exception as e:
            # If loading fails, fall back to built-in defaults
            logger.warning(f"Failed to load settings from {self.settings_file}: {e}")
            self._settings = {}

    def get_setting(self, key: str, default: Any = None) -> Any:
        """Get a setting value."""
        return self._settings.get(key, default)

    def get_all_settings(self) -> Dict[str, Any]:
        """Get all settings as a dictionary."""
        return self._settings.copy()
