"""Logging configuration for the application.

This module provides a centralized logger setup that writes logs to both stderr and a file.
Console output starts at `config.CONSOLE_LOG_LEVEL` so that results printed on stdout stay
clean; the file keeps everything from `config.LOG_LEVEL` up.

The log file is stored at `config.LOG_PATH`.
"""

import logging
import sys
from config import config

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def get_logger(name: str = __name__) -> logging.Logger:
    """Creates and configures a logger with both console and file handlers.

    The logger will:
    - Output messages from `CONSOLE_LOG_LEVEL` up to stderr.
    - Save messages from `LOG_LEVEL` up to the log file.

    Args:
        name (str): The logger name, typically `__name__`.

    Returns:
        logging.Logger: A configured logger instance.
    """
    logger = logging.getLogger(name)
    if not logger.handlers:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(config.CONSOLE_LOG_LEVEL.upper())
        console_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(console_handler)

        config.LOG_PATH.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(config.LOG_PATH, encoding='utf-8')
        file_handler.setLevel(config.LOG_LEVEL.upper())
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(file_handler)

        logger.setLevel(logging.DEBUG)
        logger.propagate = False

    return logger
