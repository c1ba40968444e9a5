"""
Tests for settings loading.
"""

import pytest

from config.settings import Settings, get_settings
from core.exceptions import ConfigurationError


class TestSettings:
    """Tests for environment-driven settings."""

    def setup_method(self):
        get_settings.cache_clear()

    def teardown_method(self):
        get_settings.cache_clear()

    def test_defaults(self):
        settings = Settings()

        assert settings.FLOAT_SIGNIFICANT_DIGITS == 12
        assert settings.ARITHMETIC_MODE == "arbitrary"

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv("ARITHMETIC_MODE", "checked128")

        assert get_settings().ARITHMETIC_MODE == "checked128"

    def test_cached(self):
        assert get_settings() is get_settings()

    def test_out_of_range_value(self, monkeypatch):
        monkeypatch.setenv("FLOAT_SIGNIFICANT_DIGITS", "3")

        with pytest.raises(ConfigurationError) as exc:
            get_settings()

        assert "FLOAT_SIGNIFICANT_DIGITS" in str(exc.value.details["errors"])
