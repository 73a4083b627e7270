import pytest

from config import config


@pytest.fixture(autouse=True)
def no_journal(monkeypatch):
    """CLI runs in tests never touch the real journal."""
    monkeypatch.setattr(config, "JOURNAL_ENABLED", False)


@pytest.fixture
def journal_path(tmp_path):
    return tmp_path / "runs.db"
