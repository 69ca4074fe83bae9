"""
Unit tests for the settings manager.
"""

import json

import pytest

from core.settings_manager import SettingsManager


@pytest.mark.unit
class TestSettingsManager:
    """Test loading user defaults."""

    def test_missing_file_gives_empty_settings(self, isolated_settings):
        """Test built-in defaults apply when no file exists."""
        manager = SettingsManager()
        assert manager.settings_file == isolated_settings
        assert manager.get_all_settings() == {}
        assert manager.get_setting("degree", 4) == 4

    def test_loads_values(self, isolated_settings):
        """Test values from the file are returned."""
        isolated_settings.write_text(
            json.dumps({"degree": 3, "field": "gfp:7"}), encoding="utf-8"
        )
        manager = SettingsManager()
        assert manager.get_setting("degree") == 3
        assert manager.get_setting("field") == "gfp:7"

    def test_all_settings_is_a_copy(self, isolated_settings):
        """Test callers cannot mutate the loaded settings."""
        isolated_settings.write_text(json.dumps({"budget": 10}), encoding="utf-8")
        manager = SettingsManager()
        manager.get_all_settings()["budget"] = 0
        assert manager.get_setting("budget") == 10

    @pytest.mark.parametrize("content", ["{not json", "[1, 2]"])
    def test_bad_file_falls_back(self, isolated_settings, content):
        """Test unreadable files are ignored."""
        isolated_settings.write_text(content, encoding="utf-8")
        assert SettingsManager().get_all_settings() == {}

    def test_explicit_path(self, temp_dir):
        """Test an explicit path wins over the environment."""
        path = temp_dir / "other.json"
        path.write_text(json.dumps({"workers": 2}), encoding="utf-8")
        assert SettingsManager(path).get_setting("workers") == 2
