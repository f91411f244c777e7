"""
TreeSpectra — Structured logging utility.

All modules call `get_logger(__name__)` to obtain a pre-configured logger.
Output is JSON-formatted (LOG_FORMAT=json) or human-readable (default).
Records go to stderr: the CLI reserves stdout for artifacts.

The CLI wraps its logger with `run_logger()` so that every line of one
invocation carries the run id, the command and the spec being computed.
"""

from __future__ import annotations

import json
import logging
import os
import sys
from typing import Any, Mapping, MutableMapping, Optional, Tuple


LOG_LEVEL:  str = os.getenv("LOG_LEVEL",  "INFO").upper()
LOG_FORMAT: str = os.getenv("LOG_FORMAT", "text").lower()  # "text" | "json"

# Run context copied into JSON lines when a record carries it.
RUN_FIELDS: Tuple[str, ...] = ("run_id", "command", "family", "depth", "operator")


class _JsonFormatter(logging.Formatter):
    """Emit log records as single-line JSON objects."""

    def format(self, record: logging.LogRecord) -> str:  # type: ignore[override]
        payload = {
            "ts":      self.formatTime(record, self.datefmt),
            "level":   record.levelname,
            "logger":  record.name,
            "msg":     record.getMessage(),
        }
        for field in RUN_FIELDS:
            value = getattr(record, field, None)
            if value is not None:
                payload[field] = value
        if record.exc_info:
            payload["exc"] = self.formatException(record.exc_info)
        return json.dumps(payload, default=str)


class _RunAdapter(logging.LoggerAdapter):
    """Attach the run context to every record without clobbering call-site extras."""

    def process(self, msg: str, kwargs: MutableMapping[str, Any]):
        kwargs["extra"] = {**self.extra, **kwargs.get("extra", {})}
        return msg, kwargs


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """
    Return a configured logger.

    Usage::

        from common.logging_util import get_logger
        log = get_logger(__name__)
        log.info("Assembled spectrum for %s at depth %d", spec.label, depth)
    """
    logger = logging.getLogger(name or "treespectra")

    if not logger.handlers:
        handler = logging.StreamHandler(sys.stderr)

        if LOG_FORMAT == "json":
            handler.setFormatter(_JsonFormatter())
        else:
            handler.setFormatter(
                logging.Formatter(
                    fmt="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
                    datefmt="%Y-%m-%dT%H:%M:%S",
                )
            )

        logger.addHandler(handler)
        logger.setLevel(getattr(logging, LOG_LEVEL, logging.INFO))
        logger.propagate = False

    return logger


def run_logger(logger: logging.Logger, run_id: Any, command: str,
               params: Mapping[str, Any]) -> logging.LoggerAdapter:
    """Wrap logger so each record carries run_id, command and the spec fields."""
    context = {"run_id": str(run_id), "command": command}
    for field in RUN_FIELDS[2:]:
        if params.get(field) is not None:
            context[field] = params[field]
    return _RunAdapter(logger, context)
