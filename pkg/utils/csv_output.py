"""
CSV and JSON artifact writers.

CSV files start with one comment line naming the package version and the
config hash; every float is written with 17 significant digits.
"""
from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

FLOAT_FORMAT = ".17g"


def format_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        if math.isinf(number):
            return "inf" if number > 0 else "-inf"
        if math.isnan(number):
            return "nan"
        return format(number, FLOAT_FORMAT)
    return str(value)


def render_csv(
    header: Sequence[str],
    rows: Iterable[Sequence[Any]],
    version: str,
    digest: str,
    annotations: dict[str, Any] | None = None,
) -> str:
    """Scalar annotations are appended to the comment line as key=value pairs."""
    buffer = io.StringIO()
    extra = "".join(f" {key}={format_value(value)}" for key, value in (annotations or {}).items())
    buffer.write(f"# cqsim {version} config_sha256={digest}{extra}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_value(value) for value in row])
    return buffer.getvalue()


def _json_ready(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_ready(v) for v in value]
    if isinstance(value, float):
        # repr-exact floats; JSON has no inf/nan literals
        if math.isfinite(value):
            return value
        return format_value(value)
    return value


def render_json(report: dict[str, Any], version: str, digest: str) -> str:
    payload = {"version": version, "config_sha256": digest, **_json_ready(report)}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def write_text(path: str | Path, text: str) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")
