from __future__ import annotations

import pytest

from rebac_miner.core.config import Settings, get_settings


def test_defaults(monkeypatch) -> None:
    for name in ("LOG_LEVEL", "REBAC_MINER_MAX_WORKERS", "REBAC_MINER_MEANING_CACHE_SIZE"):
        monkeypatch.delenv(name, raising=False)

    settings = Settings(_env_file=None)

    assert settings.log_level == "INFO"
    assert settings.max_workers is None
    assert settings.meaning_cache_size == 200_000
    assert settings.effective_workers >= 1


def test_environment_aliases(monkeypatch) -> None:
    monkeypatch.setenv("LOG_LEVEL", "DEBUG")
    monkeypatch.setenv("REBAC_MINER_MAX_WORKERS", "3")
    monkeypatch.setenv("REBAC_MINER_MEANING_CACHE_SIZE", "0")

    settings = Settings(_env_file=None)

    assert settings.log_level == "DEBUG"
    assert settings.effective_workers == 3
    assert settings.meaning_cache_size == 0


def test_invalid_worker_count_is_rejected(monkeypatch) -> None:
    monkeypatch.setenv("REBAC_MINER_MAX_WORKERS", "0")

    with pytest.raises(ValueError):
        Settings(_env_file=None)


def test_get_settings_is_cached() -> None:
    get_settings.cache_clear()

    assert get_settings() is get_settings()
    assert get_settings(LOG_LEVEL="ERROR").log_level == "ERROR"
