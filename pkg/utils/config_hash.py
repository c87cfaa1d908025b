"""Canonical hashing of run configurations."""
from __future__ import annotations

import hashlib
import json
from typing import Any


def canonical_json(data: Any) -> str:
    """Key-sorted, whitespace-free JSON; identical configs give identical text."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"), default=str)


def config_hash(data: Any) -> str:
    """
    SHA-256 hex digest of the canonical JSON form.

    Usage:
        digest = config_hash(config.model_dump(mode="json"))
    """
    return hashlib.sha256(canonical_json(data).encode()).hexdigest()
