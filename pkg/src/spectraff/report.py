"""Deterministic CSV and JSON emission.

Identical inputs must produce byte-identical files: floats use a fixed
general format, booleans become true/false, fractions are rendered exactly,
and field order is stable. The column sets are documented in
docs/csv-schema.md.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from typing import Iterable, Optional, Sequence


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    if isinstance(value, Fraction):
        return str(value)
    return str(value)


def fieldnames_for(rows: Sequence[dict]) -> list[str]:
    names: list[str] = []
    for row in rows:
        for key in row:
            if key not in names:
                names.append(key)
    return names


def rows_to_csv(rows: Sequence[dict], fieldnames: Optional[Sequence[str]] = None,
                header_comment: Optional[str] = None) -> str:
    fields = list(fieldnames) if fieldnames else fieldnames_for(rows)
    buf = io.StringIO()
    if header_comment:
        buf.write(f"# {header_comment}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([format_value(row.get(f)) for f in fields])
    return buf.getvalue()


def write_rows(path, rows: Sequence[dict], fieldnames: Optional[Sequence[str]] = None,
               header_comment: Optional[str] = None) -> None:
    text = rows_to_csv(rows, fieldnames, header_comment)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _jsonify(value):
    if isinstance(value, Fraction):
        return {"num": value.numerator, "den": value.denominator}
    if isinstance(value, dict):
        return {str(k): _jsonify(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonify(v) for v in value]
    if hasattr(value, "literal") and callable(value.literal):
        return value.literal()
    if isinstance(value, float):
        return value
    if hasattr(value, "item"):  # numpy scalars
        return value.item()
    return value


def to_json_text(obj) -> str:
    return json.dumps(_jsonify(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(to_json_text(obj))


def edge_list_rows(graph) -> Iterable[dict]:
    for u, v in graph.edges():
        yield {"u": u, "v": v}


def colored_edge_list_rows(cgraph) -> Iterable[dict]:
    for u, v, color in cgraph.edges():
        literal = getattr(color, "literal", None)
        yield {"u": u, "v": v, "color": literal() if callable(literal) else str(color)}
