"""File readers and writers: JSON is canonical, CSV is derived output only."""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Iterable, Sequence

from .complex import ColoredComplex
from .geometry import GeometricFamily, family_from_dict


def dumps(data: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _write_text(text: str, path: str | Path | None) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        Path(path).write_text(text, encoding="utf-8")


def load_json(path: str | Path) -> Any:
    if str(path) == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def load_complex(path: str | Path) -> ColoredComplex:
    return ColoredComplex.from_dict(load_json(path))


def load_family(path: str | Path) -> GeometricFamily:
    return family_from_dict(load_json(path))


def emit_complex(cx: ColoredComplex, path: str | Path | None = None) -> str:
    text = dumps(cx.to_dict())
    _write_text(text, path)
    return text


def emit_report(report: Any, path: str | Path | None = None) -> str:
    data = report.to_dict() if hasattr(report, "to_dict") else report
    text = dumps(data)
    _write_text(text, path)
    return text


def emit_table(rows: Iterable[Sequence[Any]], path: str | Path | None = None) -> str:
    """CSV with the first row as header; newline-terminated, UTF-8."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in rows:
        writer.writerow(row)
    text = buf.getvalue()
    _write_text(text, path)
    return text
