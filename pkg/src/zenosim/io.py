"""Delimited/JSON experiment output with provenance metadata.

Every file starts with (or embeds, for JSON) the tool version, the full
parameter echo and the master seed, plus a single timestamp line; with the
timestamp line removed, reruns with the same configuration are
byte-identical.  CSV is plain RFC-4180 style: header row, commas, decimal
point, floats at 12 significant digits.
"""

from __future__ import annotations

import json
from datetime import datetime, timezone
from pathlib import Path

from . import __version__

TIMESTAMP_KEY = "generated"


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _timestamp() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def write_csv(path, metadata: dict, columns: list[str], rows) -> None:
    """CSV with `# key = value` provenance lines ahead of the header."""
    path = Path(path)
    lines = [f"# zenosim {__version__}", f"# {TIMESTAMP_KEY} = {_timestamp()}"]
    for key, value in metadata.items():
        lines.append(f"# {key} = {format_value(value)}")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(format_value(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def write_json(path, metadata: dict, columns: list[str], rows, extra: dict | None = None) -> None:
    """Single JSON document mirroring the CSV data plus metadata.

    `extra` lets report-style experiments attach structured sections beyond
    the tabular data.
    """
    path = Path(path)
    document = {
        "tool": "zenosim",
        "version": __version__,
        TIMESTAMP_KEY: _timestamp(),
        "metadata": {k: _jsonable(v) for k, v in metadata.items()},
        "columns": list(columns),
        "rows": [[_jsonable(v) for v in row] for row in rows],
    }
    if extra:
        document.update(extra)
    path.write_text(json.dumps(document, indent=2) + "\n")


def _jsonable(value):
    if hasattr(value, "item"):  # numpy scalar
        return value.item()
    return value


def strip_timestamp(text: str) -> str:
    """Drop the timestamp line so deterministic outputs compare equal."""
    kept = []
    for line in text.splitlines():
        stripped = line.strip().lstrip("#").strip().strip('",')
        if stripped.startswith(f"{TIMESTAMP_KEY} =") or stripped.startswith(
            f'{TIMESTAMP_KEY}":'
        ):
            continue
        kept.append(line)
    return "\n".join(kept)
