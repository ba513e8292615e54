"""Deterministic CSV and JSON sidecar output.

Floats are written with repr (shortest round-trip form), so identical
inputs produce byte-identical files; sidecars are sorted-key JSON with
no volatile fields (timings go to the run log, not the artifact).
"""

from __future__ import annotations

import json
from pathlib import Path


def fmt(value) -> str:
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        value = value.item()  # numpy scalar -> python scalar
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_csv(path: Path, header: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def write_sidecar(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_csv(path: Path) -> tuple[list[str], list[list]]:
    text = Path(path).read_text().strip().splitlines()
    header = text[0].split(",")
    rows = []
    for line in text[1:]:
        row = []
        for tok in line.split(","):
            try:
                row.append(float(tok))
            except ValueError:
                row.append(tok)
        rows.append(row)
    return header, rows
