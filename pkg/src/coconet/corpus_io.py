"""Reading and writing document corpora.

A corpus is a UTF-8 JSON Lines file, one document per line::

    {"id": "d1", "timestamp": 1199145600, "text": "D. Kovalenko met A. Melnyk."}
    {"id": "d2", "concepts": [["person", "Kovalenko D.V."], ["company", "Acme Inc"]]}

Each record carries an ``id``, an optional integer ``timestamp`` and exactly
one of ``text`` (raw publication text) or ``concepts`` (pre-extracted
``[kind, surface]`` pairs). File order is the temporal order of the flow;
timestamps are carried along as metadata only.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Literal, Mapping, Sequence

__all__ = [
    "CorpusFormatError",
    "Document",
    "read_documents",
    "write_documents",
    "write_table",
    "format_number",
]

CONCEPT_KINDS = ("person", "company")


class CorpusFormatError(ValueError):
    """A corpus line could not be parsed into a :class:`Document`."""

    def __init__(self, message: str, path: str | os.PathLike | None = None, lineno: int | None = None):
        self.path = None if path is None else str(path)
        self.lineno = lineno
        where = ""
        if path is not None:
            where = f"{path}:"
        if lineno is not None:
            where += f"{lineno}: "
        elif where:
            where += " "
        super().__init__(where + message)


@dataclass(frozen=True)
class Document:
    """One publication of the flow.

    Exactly one of ``text`` and ``concepts`` is set. ``concepts`` is a tuple
    of ``(kind, surface)`` pairs.
    """

    id: str
    timestamp: int | None = None
    text: str | None = None
    concepts: tuple[tuple[str, str], ...] | None = None

    def __post_init__(self):
        if not isinstance(self.id, str) or not self.id:
            raise ValueError("document id must be a non-empty string")
        if (self.text is None) == (self.concepts is None):
            raise ValueError(f"document {self.id!r}: exactly one of text/concepts must be present")
        if self.concepts is not None:
            for pair in self.concepts:
                if len(pair) != 2 or pair[0] not in CONCEPT_KINDS or not isinstance(pair[1], str):
                    raise ValueError(f"document {self.id!r}: bad concept entry {pair!r}")

    def to_record(self) -> dict:
        rec: dict = {"id": self.id}
        if self.timestamp is not None:
            rec["timestamp"] = self.timestamp
        if self.text is not None:
            rec["text"] = self.text
        else:
            rec["concepts"] = [list(c) for c in self.concepts]
        return rec


def _parse_record(obj, fmt: str) -> Document:
    if not isinstance(obj, dict):
        raise ValueError("record is not a JSON object")
    unknown = set(obj) - {"id", "timestamp", "text", "concepts"}
    if unknown:
        raise ValueError(f"unknown field(s): {', '.join(sorted(unknown))}")
    if "text" in obj and "concepts" in obj:
        raise ValueError("record has both 'text' and 'concepts'")
    ts = obj.get("timestamp")
    if ts is not None and (not isinstance(ts, int) or isinstance(ts, bool)):
        raise ValueError("timestamp must be an integer")
    if fmt == "raw-text":
        if "text" not in obj or not isinstance(obj["text"], str):
            raise ValueError("raw-text record needs a string 'text' field")
        return Document(obj.get("id"), ts, text=obj["text"])
    if "concepts" not in obj or not isinstance(obj["concepts"], list):
        raise ValueError("pre-extracted record needs a 'concepts' list")
    concepts = tuple(tuple(c) if isinstance(c, list) else c for c in obj["concepts"])
    return Document(obj.get("id"), ts, concepts=concepts)


def read_documents(
    path: str | os.PathLike,
    format: Literal["raw-text", "pre-extracted"] = "pre-extracted",
) -> Iterator[Document]:
    """Stream documents from a JSON Lines corpus in file order.

    The file is read lazily, one line at a time. Blank lines are skipped.

    Raises
    ------
    CorpusFormatError
        On a malformed line (the error carries the 1-based line number) or
        on a repeated document id.
    """
    if format not in ("raw-text", "pre-extracted"):
        raise ValueError(f"unknown corpus format {format!r}")
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                doc = _parse_record(json.loads(line), format)
            except (ValueError, TypeError) as exc:
                raise CorpusFormatError(str(exc), path, lineno) from None
            if doc.id in seen:
                raise CorpusFormatError(f"duplicate document id {doc.id!r}", path, lineno)
            seen.add(doc.id)
            yield doc


def write_documents(docs: Iterable[Document], path: str | os.PathLike) -> int:
    """Write documents as JSON Lines; returns the number written."""
    n = 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for doc in docs:
            fh.write(json.dumps(doc.to_record(), ensure_ascii=False, separators=(",", ":")))
            fh.write("\n")
            n += 1
    return n


def format_number(x) -> str:
    """Render a table cell.

    Floats use the shortest round-tripping representation, which keeps every
    significant digit (``0.5`` stays ``0.5``; ``5/6`` prints 16 digits).
    """
    if isinstance(x, bool):
        return str(int(x))
    if isinstance(x, float):
        if x != x:
            return "nan"
        return repr(x)
    if hasattr(x, "item"):  # numpy scalar
        return format_number(x.item())
    if x is None:
        return ""
    return str(x)


def write_table(
    rows: Sequence[Mapping | Sequence],
    path: str | os.PathLike,
    format: Literal["csv", "tsv"] = "csv",
    columns: Sequence[str] | None = None,
) -> None:
    """Write records as a delimited table with a header row.

    ``rows`` may be mappings (keyed by column name) or sequences aligned
    with ``columns``. When ``columns`` is omitted it is taken from the keys
    of the first mapping row.
    """
    if format not in ("csv", "tsv"):
        raise ValueError(f"unknown table format {format!r}")
    if columns is None:
        if not rows or not isinstance(rows[0], Mapping):
            raise ValueError("columns are required for empty or sequence rows")
        columns = list(rows[0].keys())
    columns = list(columns)
    delimiter = "," if format == "csv" else "\t"
    lines = []
    for row in rows:
        if isinstance(row, Mapping):
            if set(row) != set(columns):
                raise ValueError(f"row keys {sorted(row)} do not match schema {columns}")
            cells = [row[c] for c in columns]
        else:
            if len(row) != len(columns):
                raise ValueError("row length does not match schema")
            cells = list(row)
        lines.append([format_number(c) for c in cells])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter=delimiter, lineterminator="\n")
        writer.writerow(columns)
        writer.writerows(lines)


def read_table(path: str | os.PathLike, format: Literal["csv", "tsv"] = "csv") -> list[dict[str, str]]:
    """Read a table written by :func:`write_table` back as string dicts."""
    delimiter = "," if format == "csv" else "\t"
    with open(Path(path), encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh, delimiter=delimiter))
