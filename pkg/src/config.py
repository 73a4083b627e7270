"""
config.py

This module defines application-level configuration using `pydantic-settings` for type-safe
and flexible environment-based settings.

Environment variables are loaded from a `.env` file at startup using `python-dotenv`.
Every setting can be overridden with a `CHASEKIT_`-prefixed variable
(e.g. `CHASEKIT_MAX_MEMORY_MB=512`).

Usage:
    from config import config
    print(config.JOURNAL_PATH)
"""

from pathlib import Path
from pydantic_settings import BaseSettings, SettingsConfigDict
from dotenv import load_dotenv


BASE_DIR = Path(__file__).parent.parent

load_dotenv()


class AppConfig(BaseSettings):
    """
    Application configuration settings.

    Attributes:
        LOG_PATH (Path): Path to the application log file.
        LOG_LEVEL (str): Level of the file log.
        CONSOLE_LOG_LEVEL (str): Level of the stderr log; stdout is reserved for results.
        JOURNAL_PATH (Path): Path to the SQLite run journal.
        JOURNAL_ENABLED (bool): Whether CLI runs are recorded in the journal.
        JOURNAL_RETENTION_DAYS (int): Journal rows older than this are trimmed after each journaled run.
        MAX_MEMORY_MB (int | None): Soft memory cap for a chase run; None disables the check.

    Configuration is automatically loaded from a `.env` file if present.
    """
    LOG_PATH: Path = BASE_DIR / "logs" / "app.log"

    LOG_LEVEL: str = "INFO"

    CONSOLE_LOG_LEVEL: str = "WARNING"

    JOURNAL_PATH: Path = BASE_DIR / "storage" / "runs.db"

    JOURNAL_ENABLED: bool = True

    JOURNAL_RETENTION_DAYS: int = 30

    MAX_MEMORY_MB: int | None = None

    model_config = SettingsConfigDict(
        env_prefix="CHASEKIT_",
        env_file=str(BASE_DIR / ".env"),
        env_file_encoding="utf-8",
        extra="ignore",
    )

# Singleton config instance used throughout the application
config = AppConfig()
