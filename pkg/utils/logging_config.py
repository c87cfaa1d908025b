"""Structured logging to stderr."""
from __future__ import annotations

import logging
import os
import sys

from pythonjsonlogger import jsonlogger

DEFAULT_LEVEL = "WARNING"


def configure_logging(level: str | None = None) -> None:
    """
    Install a single JSON handler on the root logger. The level comes from the
    argument, then LOG_LEVEL, then WARNING. Artifacts never receive log output.
    """
    level_name = (level or os.getenv("LOG_LEVEL", DEFAULT_LEVEL)).strip().upper()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(jsonlogger.JsonFormatter("%(asctime)s %(levelname)s %(name)s %(message)s"))
    root = logging.getLogger()
    for existing in list(root.handlers):
        root.removeHandler(existing)
    root.addHandler(handler)
    root.setLevel(getattr(logging, level_name, logging.WARNING))
