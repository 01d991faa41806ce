"""
Structured logging module for lommelkit.

Uses structlog with a JSON renderer routed through the standard library root
logger. Console output goes to stderr only: stdout is reserved for the
line-oriented results printed by the CLI.
"""

import logging
import os
import sys
from logging import StreamHandler
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

import structlog

DEFAULT_LEVEL = "WARNING"

_configured = False


def _shared_processors() -> list:
    return [
        structlog.contextvars.merge_contextvars,
        structlog.processors.add_log_level,
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
    ]


def _formatter(pre_chain: list) -> structlog.stdlib.ProcessorFormatter:
    return structlog.stdlib.ProcessorFormatter(
        processors=[
            structlog.stdlib.ProcessorFormatter.remove_processors_meta,
            structlog.processors.JSONRenderer(),
        ],
        foreign_pre_chain=pre_chain,
    )


def configure_logging(
    log_level: Optional[str] = None,
    log_dir: Optional[str] = None,
    enable_file_logging: bool = False,
    enable_console_logging: bool = True,
) -> structlog.BoundLogger:
    """
    Configure structured logging for library and CLI use.

    Args:
        log_level: Log level (DEBUG, INFO, WARNING, ERROR, CRITICAL). Defaults to
            the LOMMEL_LOG_LEVEL environment variable, then WARNING.
        log_dir: Directory for rotating log files. Defaults to LOG_DIR or ./logs.
        enable_file_logging: Whether to also write JSON logs to a rotating file.
        enable_console_logging: Whether to write logs to stderr.

    Returns:
        Configured structlog logger instance.
    """
    global _configured

    if log_level is None:
        log_level = os.environ.get("LOMMEL_LOG_LEVEL", DEFAULT_LEVEL)
    log_level = log_level.upper()

    pre_chain = _shared_processors()
    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            *pre_chain,
            structlog.stdlib.ProcessorFormatter.wrap_for_formatter,
        ],
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    root_logger = logging.getLogger()
    root_logger.setLevel(getattr(logging, log_level, logging.WARNING))
    root_logger.handlers.clear()

    if enable_console_logging:
        console_handler = StreamHandler(sys.stderr)
        console_handler.setLevel(logging.DEBUG)
        console_handler.setFormatter(_formatter(pre_chain))
        root_logger.addHandler(console_handler)

    if enable_file_logging:
        log_path = Path(log_dir or os.environ.get("LOG_DIR", "./logs"))
        log_path.mkdir(parents=True, exist_ok=True)
        file_handler = RotatingFileHandler(
            str(log_path / "lommelkit.log"),
            maxBytes=10 * 1024 * 1024,  # 10MB
            backupCount=5,
            encoding="utf-8",
        )
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(_formatter(pre_chain))
        root_logger.addHandler(file_handler)

    _configured = True
    return structlog.get_logger()


def get_logger(name: Optional[str] = None) -> structlog.BoundLogger:
    """
    Get a logger instance, configuring defaults on first use.

    Args:
        name: Logger name. If None, returns the default logger.

    Returns:
        Structlog logger instance.
    """
    if not _configured:
        configure_logging()
    if name:
        return structlog.get_logger(name)
    return structlog.get_logger()
