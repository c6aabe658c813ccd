"""Deterministic CSV output with a reproducibility metadata header.

Every file starts with '#'-prefixed comment lines recording the tool
version, the command line, the device source and hash, and the seed, so
a rerun with identical inputs is byte-identical.  Comma separator,
'.' decimal point, no timestamps.
"""

from __future__ import annotations

import math
from pathlib import Path


def format_value(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return f"{value:.10g}"
    return str(value)


def metadata_block(
    version: str,
    command: str,
    *,
    device: str | None = None,
    device_sha256: str | None = None,
    seed: int | None = None,
    extra: list[str] | None = None,
) -> list[str]:
    lines = [f"tunablezz {version}", f"command: {command}"]
    if device is not None:
        sha = f" sha256={device_sha256}" if device_sha256 else ""
        lines.append(f"device: {device}{sha}")
    if seed is not None:
        lines.append(f"seed: {seed}")
    lines.extend(extra or [])
    return lines


def write_csv(path: str | Path, columns: list[str], rows, metadata: list[str]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as handle:
        for line in metadata:
            handle.write(f"# {line}\n")
        handle.write(",".join(columns) + "\n")
        for row in rows:
            handle.write(",".join(format_value(v) for v in row) + "\n")
    return path


def read_data_rows(path: str | Path) -> tuple[list[str], list[list[str]]]:
    """Parse a CSV written by `write_csv`: (columns, raw string rows)."""
    columns: list[str] = []
    rows: list[list[str]] = []
    for line in Path(path).read_text().splitlines():
        if not line or line.startswith("#"):
            continue
        if not columns:
            columns = line.split(",")
        else:
            rows.append(line.split(","))
    return columns, rows
