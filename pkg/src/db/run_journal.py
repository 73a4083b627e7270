"""
run_journal.py

Keeps a journal of CLI reasoning runs in a small SQLite database.
Each row records the command, the input source, the outcome and the effort spent.

Functions:
    init_db(db_path): Creates the 'runs' table and its index.
    add_run(command, source, status, steps, elapsed_ms, timestamp, db_path): Inserts one run.
    get_recent_runs(limit, db_path): Returns the latest runs, newest first.
    trim_old_records(current_timestamp, days, db_path): Deletes runs older than a number of days.
"""

from pathlib import Path

import aiosqlite
from config import config


def _path(db_path: Path | None) -> Path:
    path = Path(db_path) if db_path is not None else config.JOURNAL_PATH
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


async def init_db(db_path: Path | None = None):
    """
    Creates the 'runs' table if it doesn't exist, with an index on the timestamp.
    """
    async with aiosqlite.connect(_path(db_path)) as db:
        await db.execute("""
            CREATE TABLE IF NOT EXISTS runs (
                id INTEGER PRIMARY KEY AUTOINCREMENT,
                command TEXT,
                source TEXT,
                status TEXT,
                steps INTEGER,
                elapsed_ms INTEGER,
                timestamp INTEGER
            )
        """)
        await db.execute("""
            CREATE INDEX IF NOT EXISTS idx_runs_timestamp
            ON runs (timestamp)
        """)
        await db.commit()


async def add_run(command: str, source: str, status: str, steps: int, elapsed_ms: int, timestamp: int,
                  db_path: Path | None = None):
    """
    Inserts one run into the 'runs' table.

    Args:
        command (str): CLI subcommand (e.g. chase, answer).
        source (str): Input file path or `builtin:<name>`.
        status (str): Outcome reported by the command (e.g. saturated, sat, yes).
        steps (int): Chase steps spent.
        elapsed_ms (int): Wall-clock time in milliseconds.
        timestamp (int): Unix timestamp in seconds.
        db_path (Path, optional): Journal location. Defaults to `config.JOURNAL_PATH`.
    """
    async with aiosqlite.connect(_path(db_path)) as db:
        await db.execute("""
            INSERT INTO runs (command, source, status, steps, elapsed_ms, timestamp)
            VALUES (?, ?, ?, ?, ?, ?)
        """, (command, source, status, steps, elapsed_ms, timestamp))
        await db.commit()


async def get_recent_runs(limit: int = 20, db_path: Path | None = None) -> list[dict]:
    """
    Retrieves the most recent runs.

    Args:
        limit (int, optional): Maximum number of rows. Defaults to 20.
        db_path (Path, optional): Journal location. Defaults to `config.JOURNAL_PATH`.

    Returns:
        list[dict]: Runs as dictionaries, newest first.
    """
    async with aiosqlite.connect(_path(db_path)) as db:
        db.row_factory = aiosqlite.Row
        async with db.execute("""
            SELECT * FROM runs
            ORDER BY timestamp DESC, id DESC
            LIMIT ?
        """, (limit,)) as cursor:
            rows = await cursor.fetchall()
            return [dict(row) for row in rows]


async def trim_old_records(current_timestamp: int, days: int = 30, db_path: Path | None = None):
    """
    Deletes runs older than the specified number of days.

    Args:
        current_timestamp (int): Current Unix timestamp in seconds.
        days (int, optional): Number of days to retain. Defaults to 30.
        db_path (Path, optional): Journal location. Defaults to `config.JOURNAL_PATH`.
    """
    threshold_timestamp = current_timestamp - days * 24 * 60 * 60
    async with aiosqlite.connect(_path(db_path)) as db:
        await db.execute("DELETE FROM runs WHERE timestamp < ?", (threshold_timestamp,))
        await db.commit()
