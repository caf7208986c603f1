"""
Logging Setup
=============

Configures the ``dcorgraph`` logger hierarchy and collects warnings raised
during a CLI run so they can be written into the JSON summary.
"""

import logging
import sys
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import List

from ..config import LoggingConfig

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
ROOT_LOGGER = "dcorgraph"


def setup_logging(config: LoggingConfig) -> logging.Logger:
    """
    Attach stderr (and optionally rotating file) handlers to the package logger.

    Calling it again replaces the handlers installed by the previous call.

    Args:
        config: Logging configuration

    Returns:
        The configured package logger
    """
    logger = logging.getLogger(ROOT_LOGGER)
    logger.setLevel(config.level)

    for handler in _managed_handlers(logger):
        logger.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter(LOG_FORMAT)

    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setFormatter(formatter)
    handlers: List[logging.Handler] = [stream_handler]

    if config.file_path:
        Path(config.file_path).parent.mkdir(parents=True, exist_ok=True)
        file_handler = RotatingFileHandler(
            config.file_path,
            mode='a',
            maxBytes=config.max_file_size_mb * 1024 * 1024,
            backupCount=config.backup_count,
            encoding='utf-8',
        )
        file_handler.setFormatter(formatter)
        handlers.append(file_handler)

    for handler in handlers:
        handler._dcorgraph_managed = True
        logger.addHandler(handler)

    return logger


class WarningCollector(logging.Handler):
    """
    Records the message text of every WARNING (or worse) log record.

    Used as a context manager around one CLI run. While active, the package
    logger passes warnings through even when configured quieter; the console
    handlers keep the configured level.
    """

    def __init__(self, logger_name: str = ROOT_LOGGER):
        super().__init__(level=logging.WARNING)
        self.logger_name = logger_name
        self.messages: List[str] = []
        self._saved_level = logging.NOTSET

    def emit(self, record: logging.LogRecord) -> None:
        self.messages.append(record.getMessage())

    def __enter__(self) -> "WarningCollector":
        logger = logging.getLogger(self.logger_name)
        self._saved_level = logger.level
        effective = logger.getEffectiveLevel()

        if effective > logging.WARNING:
            logger.setLevel(logging.WARNING)
            for handler in _managed_handlers(logger):
                handler.setLevel(effective)

        logger.addHandler(self)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        logger = logging.getLogger(self.logger_name)
        logger.removeHandler(self)
        logger.setLevel(self._saved_level)
        for handler in _managed_handlers(logger):
            handler.setLevel(logging.NOTSET)


def _managed_handlers(logger: logging.Logger) -> List[logging.Handler]:
    return [h for h in logger.handlers if getattr(h, "_dcorgraph_managed", False)]
