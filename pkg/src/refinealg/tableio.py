"""Concrete tables and their CSV form.

CSV files are RFC-4180 style, UTF-8, "\n" line endings, with one header row.
Tables carry no column names of their own, so the canonical header is the
list of column type names; loading checks only the header's column count.
Cells are parsed and rendered by the column's domain from the valuation,
which is how monetary cents round-trip through their `25€` rendering.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Any, Mapping

from .errors import CsvError
from .valuation import DomainSpec


@dataclass(frozen=True)
class Table:
    schema: tuple[str, ...]
    rows: tuple[tuple[Any, ...], ...]

    def __post_init__(self):
        for i, row in enumerate(self.rows):
            if len(row) != len(self.schema):
                raise CsvError(f"row {i + 1} has {len(row)} cells, schema has {len(self.schema)}")


def loads_csv(
    text: str, schema: tuple[str, ...], domains: Mapping[str, DomainSpec]
) -> Table:
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise CsvError("missing header row") from None
    if len(header) != len(schema):
        raise CsvError(f"header has {len(header)} columns, schema has {len(schema)}")
    rows = []
    for r, raw in enumerate(reader, start=1):
        if not raw and r == 1:
            continue
        if len(raw) != len(schema):
            raise CsvError(f"row {r} has {len(raw)} cells, expected {len(schema)}")
        cells = []
        for c, (text_cell, t) in enumerate(zip(raw, schema), start=1):
            try:
                cells.append(domains[t].parse_cell(text_cell))
            except Exception as exc:
                raise CsvError(f"row {r}, column {c}: {exc}") from None
        rows.append(tuple(cells))
    return Table(tuple(schema), tuple(rows))


def load_csv(path, schema: tuple[str, ...], domains: Mapping[str, DomainSpec]) -> Table:
    with open(path, encoding="utf-8", newline="") as fh:
        return loads_csv(fh.read(), schema, domains)


def dumps_csv(table: Table, domains: Mapping[str, DomainSpec]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(table.schema)
    for row in table.rows:
        writer.writerow([domains[t].render_cell(v) for v, t in zip(row, table.schema)])
    return out.getvalue()


def write_csv(table: Table, path, domains: Mapping[str, DomainSpec]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(dumps_csv(table, domains))
