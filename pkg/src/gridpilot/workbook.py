"""Workbook data model, A1 addressing, and the on-disk workbook format.

A workbook is an ordered list of sheets holding sparse cells. Cells are
blank, a number, text, or a formula (source text only; nothing here
evaluates anything). The JSON format is::

    {"sheets": [{"name": "Sales", "cells": {"A1": {"t": "n", "v": "701.73"}}}],
     "seeded_errors": ["Sales!B3", ...]}

Type tags: ``n`` number, ``s`` text, ``f`` formula, ``b`` blank (``v``
omitted). Number cells may carry an optional ``fmt`` display prefix
(e.g. a currency symbol); it never affects classification.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import re
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from enum import Enum
from pathlib import Path


class WorkbookError(ValueError):
    """Malformed workbook document or address."""


_A1_RE = re.compile(r"^([A-Za-z]+)([0-9]+)$")
# Columns run A..ZZZ; three letters is already past practical sheet widths.
MAX_COL = 18278


def parse_a1(text: str) -> tuple[int, int]:
    """Decode an A1 cell label into 1-based (col, row).

    Letters are bijective base-26 ("A"=1, "Z"=26, "AA"=27).
    """
    m = _A1_RE.match(text.strip())
    if not m:
        raise WorkbookError(f"not an A1 cell label: {text!r}")
    letters, digits = m.group(1), m.group(2)
    col = 0
    for ch in letters.upper():
        col = col * 26 + (ord(ch) - ord("A") + 1)
    row = int(digits)
    if row < 1:
        raise WorkbookError(f"row must be >= 1: {text!r}")
    if digits[0] == "0":
        raise WorkbookError(f"row has a leading zero: {text!r}")
    return col, row


def format_a1(col: int, row: int) -> str:
    """Inverse of :func:`parse_a1`."""
    if col < 1 or row < 1:
        raise WorkbookError(f"coordinates must be >= 1: ({col}, {row})")
    letters = ""
    c = col
    while c > 0:
        c, rem = divmod(c - 1, 26)
        letters = chr(rem + ord("A")) + letters
    return f"{letters}{row}"


def _check_sheet_name(name: str) -> None:
    if not name or name != name.strip():
        raise WorkbookError(f"sheet name must be non-empty with no outer whitespace: {name!r}")
    if "!" in name:
        raise WorkbookError(f"sheet name may not contain '!': {name!r}")


@dataclass(frozen=True)
class CellAddress:
    """A cell position: sheet name plus 1-based column and row."""

    sheet: str
    col: int
    row: int

    def __post_init__(self) -> None:
        _check_sheet_name(self.sheet)
        if self.col < 1 or self.row < 1:
            raise WorkbookError(f"coordinates must be >= 1: ({self.col}, {self.row})")

    @property
    def a1(self) -> str:
        """Cell label without the sheet, e.g. ``AA10``."""
        return format_a1(self.col, self.row)

    @property
    def text(self) -> str:
        """Full address, e.g. ``Sales!AA10``. Round-trips via :func:`parse_address`."""
        return f"{self.sheet}!{self.a1}"

    def shifted(self, dcol: int, drow: int) -> "CellAddress":
        return CellAddress(self.sheet, self.col + dcol, self.row + drow)

    def __str__(self) -> str:
        return self.text


def parse_address(text: str, default_sheet: str | None = None) -> CellAddress:
    """Parse ``Sheet!A1`` (or bare ``A1`` with a default sheet).

    Sheet names may contain spaces; the split happens at the last ``!``.
    A leading single-quoted sheet (``'Opening Stock'!D6``) is accepted too.
    """
    text = text.strip()
    if text.startswith("'"):
        end = text.find("'!", 1)
        if end < 0:
            raise WorkbookError(f"unterminated quoted sheet name: {text!r}")
        sheet = text[1:end].replace("''", "'")
        cell = text[end + 2 :]
    elif "!" in text:
        sheet, _, cell = text.rpartition("!")
    else:
        if default_sheet is None:
            raise WorkbookError(f"address has no sheet and no default given: {text!r}")
        sheet, cell = default_sheet, text
    col, row = parse_a1(cell)
    return CellAddress(sheet, col, row)


class CellKind(Enum):
    BLANK = "b"
    NUMBER = "n"
    TEXT = "s"
    FORMULA = "f"


@dataclass(frozen=True)
class CellContent:
    """One cell's content. Numbers keep their verbatim decimal text."""

    kind: CellKind
    value: str = ""
    fmt: str | None = None

    def __post_init__(self) -> None:
        if self.kind is CellKind.BLANK and self.value:
            raise WorkbookError("blank cells carry no payload")
        if self.kind is CellKind.FORMULA and not self.value.startswith("="):
            raise WorkbookError(f"formula must start with '=': {self.value!r}")
        if self.kind is CellKind.NUMBER:
            try:
                Decimal(self.value)
            except InvalidOperation:
                raise WorkbookError(f"not a decimal number: {self.value!r}") from None

    @property
    def is_blank(self) -> bool:
        return self.kind is CellKind.BLANK

    @property
    def number(self) -> Decimal:
        if self.kind is not CellKind.NUMBER:
            raise WorkbookError("cell is not a number")
        return Decimal(self.value)


BLANK = CellContent(CellKind.BLANK)


def number(value: str, fmt: str | None = None) -> CellContent:
    return CellContent(CellKind.NUMBER, value, fmt)


def text(value: str) -> CellContent:
    return CellContent(CellKind.TEXT, value)


def formula(source: str) -> CellContent:
    return CellContent(CellKind.FORMULA, source)


@dataclass
class Sheet:
    """A sparse grid of cells, keyed by (col, row)."""

    name: str
    cells: dict[tuple[int, int], CellContent] = field(default_factory=dict)

    def cell(self, col: int, row: int) -> CellContent:
        return self.cells.get((col, row), BLANK)

    @property
    def used_range(self) -> tuple[int, int, int, int] | None:
        """Tight bounding box (min_col, min_row, max_col, max_row) of non-blank cells."""
        coords = [k for k, v in self.cells.items() if not v.is_blank]
        if not coords:
            return None
        cols = [c for c, _ in coords]
        rows = [r for _, r in coords]
        return min(cols), min(rows), max(cols), max(rows)


@dataclass
class Workbook:
    """Ordered sheets (tab order) plus optional seeded-error annotations.

    Treated as immutable after load; sessions share it read-only.
    """

    sheets: list[Sheet] = field(default_factory=list)
    seeded_errors: set[CellAddress] | None = None

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for sh in self.sheets:
            key = sh.name.casefold()
            if key in seen:
                raise WorkbookError(f"duplicate sheet name: {sh.name!r}")
            seen.add(key)

    def sheet(self, name: str) -> Sheet | None:
        """Case-insensitive sheet lookup."""
        key = name.casefold()
        for sh in self.sheets:
            if sh.name.casefold() == key:
                return sh
        return None

    def sheet_index(self, name: str) -> int | None:
        key = name.casefold()
        for i, sh in enumerate(self.sheets):
            if sh.name.casefold() == key:
                return i
        return None

    def cell(self, addr: CellAddress) -> CellContent:
        sh = self.sheet(addr.sheet)
        if sh is None:
            raise WorkbookError(f"no such sheet: {addr.sheet!r}")
        return sh.cell(addr.col, addr.row)

    def resolve_sheet_name(self, name: str) -> str | None:
        """Canonical (tab) spelling of a sheet name, or None if absent."""
        sh = self.sheet(name)
        return sh.name if sh else None


def classify_eligible(workbook: Workbook) -> set[CellAddress]:
    """Cells that count for audit coverage: numeric data or a formula."""
    out: set[CellAddress] = set()
    for sh in workbook.sheets:
        for (col, row), content in sh.cells.items():
            if content.kind in (CellKind.NUMBER, CellKind.FORMULA):
                out.add(CellAddress(sh.name, col, row))
    return out


# ---------------------------------------------------------------------------
# JSON document format


def _cell_from_json(label: str, obj: dict, sheet_name: str) -> tuple[tuple[int, int], CellContent]:
    try:
        col, row = parse_a1(label)
    except WorkbookError as exc:
        raise WorkbookError(f"sheet {sheet_name!r}: bad cell address {label!r}: {exc}") from None
    if not isinstance(obj, dict) or "t" not in obj:
        raise WorkbookError(f"cell {sheet_name}!{label}: expected an object with a 't' tag")
    tag = obj["t"]
    value = obj.get("v", "")
    fmt = obj.get("fmt")
    try:
        kind = CellKind(tag)
    except ValueError:
        raise WorkbookError(f"cell {sheet_name}!{label}: unknown type tag {tag!r}") from None
    try:
        content = CellContent(kind, str(value) if value != "" else "", fmt)
    except WorkbookError as exc:
        raise WorkbookError(f"cell {sheet_name}!{label}: {exc}") from None
    return (col, row), content


def loads(document: str | bytes) -> Workbook:
    """Parse the JSON workbook format (UTF-8 text or bytes)."""
    if isinstance(document, bytes):
        document = document.decode("utf-8")
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise WorkbookError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or not isinstance(doc.get("sheets"), list):
        raise WorkbookError("document must be an object with a 'sheets' list")
    if not doc["sheets"]:
        raise WorkbookError("workbook has no sheets")
    sheets: list[Sheet] = []
    for sheet_obj in doc["sheets"]:
        name = sheet_obj.get("name")
        if not name or not isinstance(name, str):
            raise WorkbookError("every sheet needs a non-empty name")
        _check_sheet_name(name)
        cells: dict[tuple[int, int], CellContent] = {}
        for label, obj in (sheet_obj.get("cells") or {}).items():
            key, content = _cell_from_json(label, obj, name)
            if not content.is_blank:
                cells[key] = content
        sheets.append(Sheet(name, cells))
    seeded: set[CellAddress] | None = None
    if "seeded_errors" in doc and doc["seeded_errors"] is not None:
        seeded = set()
        names = {sh.name.casefold() for sh in sheets}
        for item in doc["seeded_errors"]:
            addr = parse_address(item)
            if addr.sheet.casefold() not in names:
                raise WorkbookError(f"seeded error on unknown sheet: {item!r}")
            seeded.add(addr)
    return Workbook(sheets, seeded)


def load(path: str | Path) -> Workbook:
    return loads(Path(path).read_bytes())


def dumps(workbook: Workbook) -> str:
    """Canonical serialization: cells in reading order, stable key order."""
    sheets = []
    for sh in workbook.sheets:
        cells = {}
        for (col, row) in sorted(sh.cells, key=lambda k: (k[1], k[0])):
            content = sh.cells[(col, row)]
            obj: dict = {"t": content.kind.value}
            if content.kind is not CellKind.BLANK:
                obj["v"] = content.value
            if content.fmt is not None:
                obj["fmt"] = content.fmt
            cells[format_a1(col, row)] = obj
        sheets.append({"name": sh.name, "cells": cells})
    doc: dict = {"sheets": sheets}
    if workbook.seeded_errors is not None:
        order = {sh.name.casefold(): i for i, sh in enumerate(workbook.sheets)}
        doc["seeded_errors"] = [
            a.text
            for a in sorted(
                workbook.seeded_errors,
                key=lambda a: (order.get(a.sheet.casefold(), 99), a.row, a.col),
            )
        ]
    return json.dumps(doc, ensure_ascii=False, separators=(",", ":"))


def save(workbook: Workbook, path: str | Path) -> None:
    Path(path).write_text(dumps(workbook), encoding="utf-8")


def workbook_sha256(workbook: Workbook) -> str:
    return hashlib.sha256(dumps(workbook).encode("utf-8")).hexdigest()


def sheet_from_csv(name: str, source: str | Path | io.TextIOBase) -> Sheet:
    """Build a values-only sheet from CSV (numbers and text; no formulas)."""
    if isinstance(source, (str, Path)):
        fh: io.TextIOBase = open(source, newline="", encoding="utf-8")
        close = True
    else:
        fh, close = source, False
    try:
        cells: dict[tuple[int, int], CellContent] = {}
        for r, rowvals in enumerate(csv.reader(fh), start=1):
            for c, raw in enumerate(rowvals, start=1):
                raw = raw.strip()
                if not raw:
                    continue
                if raw.startswith("="):
                    raise WorkbookError(
                        f"CSV import is values-only; formula at {name}!{format_a1(c, r)}"
                    )
                try:
                    Decimal(raw)
                    cells[(c, r)] = number(raw)
                except InvalidOperation:
                    cells[(c, r)] = text(raw)
        return Sheet(name, cells)
    finally:
        if close:
            fh.close()


def add_csv_sheets(workbook: Workbook, specs: list[str]) -> Workbook:
    """Apply ``name=path`` CSV import specs, returning a new workbook."""
    sheets = list(workbook.sheets)
    for spec in specs:
        name, sep, path = spec.partition("=")
        if not sep or not name or not path:
            raise WorkbookError(f"--csv expects name=path, got {spec!r}")
        sheets.append(sheet_from_csv(name, path))
    return Workbook(sheets, workbook.seeded_errors)
