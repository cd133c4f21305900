"""Structured JSON logging used by the library and the CLI."""

from __future__ import annotations

import json
import logging
import sys
from datetime import datetime, timezone
from typing import Any

UTC = timezone.utc  # datetime.UTC is 3.11+

_RESERVED = frozenset(logging.makeLogRecord({}).__dict__) | {"message", "asctime"}


class StructuredFormatter(logging.Formatter):
    """Render each record as a single JSON object line."""

    def format(self, record: logging.LogRecord) -> str:
        data: dict[str, Any] = {
            key: value for key, value in record.__dict__.items() if key not in _RESERVED
        }
        entry: dict[str, Any] = {
            "ts": datetime.fromtimestamp(record.created, tz=UTC).isoformat(),
            "level": record.levelname.lower(),
            "component": record.name,
            "message": record.getMessage(),
            "data": data,
        }
        if record.exc_info:
            entry["data"]["exception"] = self.formatException(record.exc_info)
        return json.dumps(entry, ensure_ascii=False, default=_jsonable)


def log_event(
    logger: logging.Logger,
    event: str,
    *,
    level: int = logging.INFO,
    **data: Any,
) -> None:
    """Log a named event with a JSON payload.

    The message itself is the JSON document so plain handlers stay readable;
    the structured formatter additionally exposes the fields under ``data``.
    """
    if not logger.isEnabledFor(level):
        return
    payload = {"event": event, **data}
    logger.log(
        level,
        json.dumps(payload, ensure_ascii=False, default=_jsonable),
        extra={"event": event, "fields": data},
    )


def configure_logging(level: str | int = "WARNING") -> None:
    """Install the structured formatter on a stderr handler of the ``wls`` loggers."""
    resolved = logging.getLevelName(level.upper()) if isinstance(level, str) else level
    if not isinstance(resolved, int):
        msg = f"Unknown log level: {level!r}"
        raise ValueError(msg)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(StructuredFormatter())
    for name in ("wls", "wls_cli"):
        logger = logging.getLogger(name)
        logger.handlers = [handler]
        logger.setLevel(resolved)
        logger.propagate = False


def _jsonable(value: Any) -> Any:
    tolist = getattr(value, "tolist", None)
    if callable(tolist):
        return tolist()
    return str(value)
