"""
Simulator error handling utilities.
"""
from __future__ import annotations

from enum import Enum
from typing import Any


class ExitCode(Enum):
    """Process exit statuses of the command-line runner."""
    SUCCESS = 0
    CONFIG_ERROR = 1
    NON_CONVERGENCE = 2


class ConfigError(ValueError):
    """Malformed run configuration or out-of-range physics parameters."""


class NonConvergenceError(RuntimeError):
    """A numerical procedure did not reach its convergence criterion."""


def create_error_report(
    code: ExitCode,
    message: str,
    data: dict[str, Any] | None = None
) -> dict[str, Any]:
    """
    Diagnostic printed to stderr as one JSON line before a non-zero exit.
    The exit code is repeated by value and name; data holds extra context
    such as the underlying parser or validation message.
    """
    return {
        "error": {
            "code": code.value,
            "name": code.name,
            "message": message,
            "data": data or {}
        }
    }
