from __future__ import annotations

import contextvars
import datetime as _dt
import json as _json
import logging
import logging.handlers
import os
import sys
from pathlib import Path
from typing import Optional

from rich.logging import RichHandler

_configured = False
_corr_id_var: contextvars.ContextVar[str] = contextvars.ContextVar("corr_id", default="")

DEFAULT_LOG_FILE = "logs/depth-subconvexity.log"


def set_correlation_id(corr_id: str) -> None:
    _corr_id_var.set(corr_id)


def get_correlation_id() -> str:
    return _corr_id_var.get()


class CorrelationFilter(logging.Filter):
    def filter(self, record: logging.LogRecord) -> bool:  # type: ignore[override]
        try:
            record.corr_id = get_correlation_id()
        except Exception:
            record.corr_id = ""
        return True


class JSONFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:  # type: ignore[override]
        ts = _dt.datetime.fromtimestamp(record.created, tz=_dt.timezone.utc)
        payload = {
            "ts": ts.isoformat().replace("+00:00", "Z"),
            "level": record.levelname,
            "logger": record.name,
            "msg": record.getMessage(),
            "corr_id": getattr(record, "corr_id", ""),
        }
        if hasattr(record, "event"):
            payload["event"] = getattr(record, "event")
        if hasattr(record, "fields"):
            payload["fields"] = getattr(record, "fields")
        return _json.dumps(payload, ensure_ascii=False, default=str)


def _setup_file_handler(log_file: Path, json_format: bool = False) -> logging.Handler:
    """Rotating file handler; everything at DEBUG goes to disk."""
    log_file.parent.mkdir(parents=True, exist_ok=True)
    handler = logging.handlers.RotatingFileHandler(
        log_file,
        maxBytes=10 * 1024 * 1024,  # 10MB
        backupCount=5,
        encoding="utf-8",
    )
    if json_format:
        formatter: logging.Formatter = JSONFormatter()
    else:
        formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )
    handler.setFormatter(formatter)
    return handler


def _setup_console_handler(use_rich: bool = True, json_format: bool = False) -> logging.Handler:
    handler: logging.Handler
    if json_format:
        handler = logging.StreamHandler(sys.stdout)
        handler.setFormatter(JSONFormatter())
    elif use_rich:
        handler = RichHandler(rich_tracebacks=True, markup=True, show_path=False, show_time=False)
        handler.setFormatter(logging.Formatter("%(message)s"))
    else:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("%(asctime)s [%(levelname)s] %(name)s: %(message)s"))
    return handler


def configure_logging(
    level: str = "WARNING",
    log_file: Optional[str] = None,
    use_rich: bool = True,
    enable_file_logging: bool = False,
    json_format: bool = False,
) -> None:
    """
    Configure application-wide logging.
    Args:
        level: console level (DEBUG, INFO, WARNING, ERROR, CRITICAL)
        log_file: path to log file (defaults to logs/depth-subconvexity.log)
        use_rich: Rich formatting for console output
        enable_file_logging: also log to a rotating file
        json_format: one JSON object per record
    """
    global _configured

    if _configured:
        return

    numeric_level = getattr(logging, level.upper(), logging.INFO)
    handlers: list[logging.Handler] = []

    console_handler = _setup_console_handler(use_rich, json_format)
    console_handler.setLevel(numeric_level)
    console_handler.addFilter(CorrelationFilter())
    handlers.append(console_handler)

    if enable_file_logging:
        path = Path(log_file) if log_file else Path(DEFAULT_LOG_FILE)
        file_handler = _setup_file_handler(path, json_format)
        file_handler.setLevel(logging.DEBUG)
        file_handler.addFilter(CorrelationFilter())
        handlers.append(file_handler)

    logging.basicConfig(level=logging.DEBUG, handlers=handlers, force=True)

    # matplotlib is chatty at DEBUG
    logging.getLogger("matplotlib").setLevel(logging.WARNING)

    _configured = True


def reset_logging() -> None:
    """Drop the configured guard so the next CLI invocation reconfigures handlers."""
    global _configured
    _configured = False


def get_logger(name: str, level: Optional[str] = None) -> logging.Logger:
    """
    Get a logger, configuring defaults on first use.
    Args:
        name: logger name (typically __name__)
        level: override level for this logger
    """
    if not _configured:
        configure_logging()

    logger = logging.getLogger(name)
    if level:
        logger.setLevel(getattr(logging, level.upper(), logging.INFO))
    return logger


def setup_production_logging(json_format: bool = False) -> None:
    log_file = os.getenv("LOG_FILE")
    configure_logging(
        level=os.getenv("LOG_LEVEL", "WARNING"),
        log_file=log_file,
        use_rich=not json_format,
        enable_file_logging=bool(log_file),
        json_format=json_format or os.getenv("LOG_FORMAT", "text").lower() == "json",
    )


def setup_development_logging(json_format: bool = False) -> None:
    configure_logging(
        level="DEBUG",
        use_rich=not json_format,
        enable_file_logging=False,
        json_format=json_format or os.getenv("LOG_FORMAT", "text").lower() == "json",
    )
