import pytest

from theta.settings import ENV_MAPPING, get_settings


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch):
    """Every test starts from default settings"""
    for var in ENV_MAPPING:
        monkeypatch.delenv(var, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()
