"""Tests for settings and their overrides."""

from umt.config import Settings, get_settings, resolve


class TestSettings:
    """Tests for defaults and environment overrides."""

    def test_defaults(self):
        settings = Settings()
        assert settings.cap == 1_000_000
        assert settings.depth_cap == 3
        assert settings.default_depth == 2
        assert settings.seed == 0
        assert settings.canonicalize is True

    def test_environment_override(self, monkeypatch):
        """Test that UMT_ variables win once the cache is cleared."""
        monkeypatch.setenv("UMT_CAP", "500")
        monkeypatch.setenv("UMT_CANONICALIZE", "false")
        get_settings.cache_clear()
        settings = get_settings()
        assert settings.cap == 500
        assert settings.canonicalize is False

    def test_settings_are_cached(self):
        assert get_settings() is get_settings()


class TestResolve:
    """Tests for explicit values against configured defaults."""

    def test_explicit_value_wins(self):
        assert resolve(7, "default_depth") == 7
        assert resolve(0, "seed") == 0

    def test_default_from_settings(self, monkeypatch):
        assert resolve(None, "default_depth") == 2
        monkeypatch.setenv("UMT_DEFAULT_DEPTH", "1")
        get_settings.cache_clear()
        assert resolve(None, "default_depth") == 1
