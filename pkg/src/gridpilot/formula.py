"""Formula tokenizing, reference extraction, and translation-invariant shapes.

The supported grammar covers what audit targets actually contain: numbers,
double-quoted strings, A1 references with optional ``$`` anchors and an
optional sheet qualifier (``Sheet!A1`` or ``'Opening Stock'!D6``), ranges
``a:b``, the operators ``+ - * / ^ % & = <> < <= > >=``, parentheses, and
comma-separated function calls. 3-D ranges, external-workbook references,
and defined names are rejected with a clear error.

"Semantically similar" cells are defined here as cells of the same
content class whose formulas, if any, have equal normalized shapes: every
relative reference rewritten as an R1C1 offset from the cell's own anchor,
so any two formulas related by pure translation compare equal. There is no
canonical definition of cell similarity; this one is deliberately narrow
and deterministic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .workbook import CellAddress, CellContent, CellKind, format_a1


class FormulaError(ValueError):
    """Formula text outside the supported grammar."""


@dataclass(frozen=True)
class Reference:
    """A single cell reference; ``sheet`` is None for same-sheet refs."""

    sheet: str | None
    col: int
    row: int
    col_abs: bool = False
    row_abs: bool = False

    def resolved_against(self, anchor_sheet: str) -> tuple[str, int, int]:
        return (self.sheet or anchor_sheet, self.col, self.row)


@dataclass(frozen=True)
class RangeRef:
    """A rectangular range; corners normalized so start <= end on both axes."""

    start: Reference
    end: Reference


@dataclass(frozen=True)
class RefItem:
    """One reference occurrence in a formula, with its source character span."""

    ref: Reference | RangeRef
    span: tuple[int, int]

    @property
    def is_range(self) -> bool:
        return isinstance(self.ref, RangeRef)

    @property
    def start_ref(self) -> Reference:
        return self.ref.start if isinstance(self.ref, RangeRef) else self.ref


class _Tok(Enum):
    NUMBER = "number"
    STRING = "string"
    REF = "ref"
    IDENT = "ident"
    OP = "op"
    LPAREN = "("
    RPAREN = ")"
    COMMA = ","
    COLON = ":"


@dataclass(frozen=True)
class _Token:
    kind: _Tok
    text: str
    start: int
    end: int
    ref: Reference | None = None


_WS = re.compile(r"\s+")
_NUMBER = re.compile(r"\d+(?:\.\d+)?(?:[eE][+-]?\d+)?|\.\d+")
_STRING = re.compile(r'"(?:[^"]|"")*"')
_SHEET_QUOTED = re.compile(r"'((?:[^']|'')+)'!")
_SHEET_PLAIN = re.compile(r"([A-Za-z_][A-Za-z0-9_.]*)!")
_CELL = re.compile(r"(\$?)([A-Za-z]{1,3})(\$?)([1-9][0-9]*)")
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*")
_OPS = ("<=", ">=", "<>", "+", "-", "*", "/", "^", "%", "&", "=", "<", ">")


def _col_number(letters: str) -> int:
    col = 0
    for ch in letters.upper():
        col = col * 26 + (ord(ch) - ord("A") + 1)
    return col


def _match_cell(source: str, pos: int, sheet: str | None, start: int) -> _Token | None:
    """Cell reference at ``pos`` with a clean right boundary, or None."""
    m = _CELL.match(source, pos)
    if not m:
        return None
    end = m.end()
    if end < len(source) and (source[end].isalnum() or source[end] in "_$"):
        return None
    ref = Reference(
        sheet=sheet,
        col=_col_number(m.group(2)),
        row=int(m.group(4)),
        col_abs=bool(m.group(1)),
        row_abs=bool(m.group(3)),
    )
    return _Token(_Tok.REF, source[start:end], start, end, ref)


def tokenize(source: str) -> list[_Token]:
    """Split a formula (starting with '=') into tokens with source offsets."""
    if not source.startswith("="):
        raise FormulaError("formula must start with '='")
    tokens: list[_Token] = []
    i, n = 1, len(source)
    simple = {"(": _Tok.LPAREN, ")": _Tok.RPAREN, ",": _Tok.COMMA, ":": _Tok.COLON}
    while i < n:
        ch = source[i]
        m = _WS.match(source, i)
        if m:
            i = m.end()
            continue
        if ch == '"':
            m = _STRING.match(source, i)
            if not m:
                raise FormulaError(f"unbalanced string quote at offset {i}")
            tokens.append(_Token(_Tok.STRING, m.group(0), i, m.end()))
            i = m.end()
            continue
        if ch == "'":
            m = _SHEET_QUOTED.match(source, i)
            if not m:
                raise FormulaError(f"unbalanced sheet quote at offset {i}")
            sheet = m.group(1).replace("''", "'")
            tok = _match_cell(source, m.end(), sheet, i)
            if tok is None:
                raise FormulaError(f"expected a cell after sheet qualifier at offset {i}")
            tokens.append(tok)
            i = tok.end
            continue
        if ch == "[":
            raise FormulaError(f"external-workbook references are not supported (offset {i})")
        if ch in simple:
            tokens.append(_Token(simple[ch], ch, i, i + 1))
            i += 1
            continue
        if ch == "!":
            raise FormulaError(f"dangling '!' at offset {i}")
        op = next((op for op in _OPS if source.startswith(op, i)), None)
        if op is not None:
            tokens.append(_Token(_Tok.OP, op, i, i + len(op)))
            i += len(op)
            continue
        m = _NUMBER.match(source, i)
        if m:
            tokens.append(_Token(_Tok.NUMBER, m.group(0), i, m.end()))
            i = m.end()
            continue
        m = _SHEET_PLAIN.match(source, i)
        if m:
            tok = _match_cell(source, m.end(), m.group(1), i)
            if tok is None:
                raise FormulaError(f"expected a cell after sheet qualifier at offset {i}")
            tokens.append(tok)
            i = tok.end
            continue
        ident = _IDENT.match(source, i)
        if ident is not None:
            # A name followed by '(' is a function call, even when it also
            # looks like a cell (LOG10).
            j = ident.end()
            while j < n and source[j].isspace():
                j += 1
            if j < n and source[j] == "(":
                tokens.append(_Token(_Tok.IDENT, ident.group(0), i, ident.end()))
                i = ident.end()
                continue
        cell = _match_cell(source, i, None, i)
        if cell is not None:
            tokens.append(cell)
            i = cell.end
            continue
        if ident is not None:
            raise FormulaError(f"unsupported name {ident.group(0)!r} at offset {i}")
        raise FormulaError(f"unexpected character {ch!r} at offset {i}")
    return tokens


@dataclass(frozen=True)
class _Node:
    """Post-parse token: as tokenize() but ranges folded into one item."""

    kind: _Tok
    text: str
    start: int
    end: int
    item: RefItem | None = None


def _normalize_range(start: Reference, end: Reference) -> RangeRef:
    if end.sheet is not None and start.sheet is not None:
        if end.sheet.casefold() != start.sheet.casefold():
            raise FormulaError(
                f"3-D range {start.sheet!r}:{end.sheet!r} is not supported"
            )
    sheet = start.sheet if start.sheet is not None else end.sheet
    (c1, ca1), (c2, ca2) = (start.col, start.col_abs), (end.col, end.col_abs)
    if c1 > c2:
        (c1, ca1), (c2, ca2) = (c2, ca2), (c1, ca1)
    (r1, ra1), (r2, ra2) = (start.row, start.row_abs), (end.row, end.row_abs)
    if r1 > r2:
        (r1, ra1), (r2, ra2) = (r2, ra2), (r1, ra1)
    return RangeRef(
        Reference(sheet, c1, r1, ca1, ra1),
        Reference(sheet, c2, r2, ca2, ra2),
    )


def _fold_ranges(tokens: list[_Token]) -> list[_Node]:
    nodes: list[_Node] = []
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if (
            tok.kind is _Tok.REF
            and i + 2 < len(tokens)
            and tokens[i + 1].kind is _Tok.COLON
            and tokens[i + 2].kind is _Tok.REF
        ):
            end_tok = tokens[i + 2]
            rng = _normalize_range(tok.ref, end_tok.ref)
            span = (tok.start, end_tok.end)
            nodes.append(_Node(_Tok.REF, "", tok.start, end_tok.end, RefItem(rng, span)))
            i += 3
            continue
        if tok.kind is _Tok.COLON:
            raise FormulaError(f"':' outside a range at offset {tok.start}")
        if tok.kind is _Tok.REF:
            nodes.append(
                _Node(_Tok.REF, tok.text, tok.start, tok.end, RefItem(tok.ref, (tok.start, tok.end)))
            )
            i += 1
            continue
        nodes.append(_Node(tok.kind, tok.text, tok.start, tok.end))
        i += 1
    return nodes


class _Parser:
    """Recursive-descent validator over the folded token stream."""

    def __init__(self, nodes: list[_Node]):
        self.nodes = nodes
        self.pos = 0

    def peek(self) -> _Node | None:
        return self.nodes[self.pos] if self.pos < len(self.nodes) else None

    def take(self) -> _Node:
        node = self.peek()
        if node is None:
            raise FormulaError("formula ends unexpectedly")
        self.pos += 1
        return node

    def parse(self) -> None:
        if not self.nodes:
            raise FormulaError("empty formula")
        self.expr()
        if self.pos != len(self.nodes):
            node = self.nodes[self.pos]
            raise FormulaError(f"unexpected {node.text or node.kind.value!r} at offset {node.start}")

    def expr(self) -> None:
        self.term()
        while True:
            node = self.peek()
            if node is not None and node.kind is _Tok.OP and node.text != "%":
                self.take()
                self.term()
            else:
                return

    def term(self) -> None:
        node = self.peek()
        while node is not None and node.kind is _Tok.OP and node.text in ("+", "-"):
            self.take()
            node = self.peek()
        self.primary()
        node = self.peek()
        while node is not None and node.kind is _Tok.OP and node.text == "%":
            self.take()
            node = self.peek()

    def primary(self) -> None:
        node = self.take()
        if node.kind in (_Tok.NUMBER, _Tok.STRING, _Tok.REF):
            return
        if node.kind is _Tok.IDENT:
            opener = self.take()
            if opener.kind is not _Tok.LPAREN:
                raise FormulaError(f"expected '(' after {node.text!r}")
            nxt = self.peek()
            if nxt is not None and nxt.kind is _Tok.RPAREN:
                self.take()
                return
            self.expr()
            while True:
                nxt = self.take()
                if nxt.kind is _Tok.RPAREN:
                    return
                if nxt.kind is _Tok.COMMA:
                    self.expr()
                    continue
                raise FormulaError(f"expected ',' or ')' at offset {nxt.start}")
        if node.kind is _Tok.LPAREN:
            self.expr()
            closer = self.take()
            if closer.kind is not _Tok.RPAREN:
                raise FormulaError(f"unbalanced parenthesis at offset {node.start}")
            return
        if node.kind is _Tok.RPAREN:
            raise FormulaError(f"unbalanced ')' at offset {node.start}")
        raise FormulaError(f"unexpected {node.text!r} at offset {node.start}")


def _parse_nodes(source: str) -> list[_Node]:
    nodes = _fold_ranges(tokenize(source))
    _Parser(nodes).parse()
    return nodes


def extract_references(source: str) -> list[RefItem]:
    """All cell/range references in textual (left-to-right) order.

    Range endpoints are folded into a single item; duplicates are kept
    (deduplication is the navigation layer's concern).
    """
    return [node.item for node in _parse_nodes(source) if node.item is not None]


_PLAIN_SHEET = re.compile(r"[A-Za-z_][A-Za-z0-9_.]*$")


def _sheet_prefix(sheet: str | None) -> str:
    if sheet is None:
        return ""
    if _PLAIN_SHEET.match(sheet):
        return f"{sheet}!"
    return "'" + sheet.replace("'", "''") + "'!"


def _r1c1_axis(letter: str, absolute: bool, value: int, anchor_value: int) -> str:
    if absolute:
        return f"{letter}{value}"
    delta = value - anchor_value
    return letter if delta == 0 else f"{letter}[{delta}]"


def _r1c1(ref: Reference, anchor: CellAddress, with_sheet: bool = True) -> str:
    prefix = _sheet_prefix(ref.sheet) if with_sheet else ""
    return (
        prefix
        + _r1c1_axis("R", ref.row_abs, ref.row, anchor.row)
        + _r1c1_axis("C", ref.col_abs, ref.col, anchor.col)
    )


def normalize_shape(source: str, anchor: CellAddress) -> str:
    """Canonical form of a formula as seen from ``anchor``.

    Relative references become R[dr]C[dc] offsets, absolute axes stay
    absolute (RnCn), whitespace is stripped, function names are upper-cased,
    and literals are kept verbatim. Two formulas related by translating
    their relative references produce equal shapes.
    """
    nodes = _parse_nodes(source)
    parts: list[str] = ["="]
    for i, node in enumerate(nodes):
        if node.item is not None:
            ref = node.item.ref
            if isinstance(ref, RangeRef):
                parts.append(_r1c1(ref.start, anchor))
                parts.append(":")
                parts.append(_r1c1(ref.end, anchor, with_sheet=False))
            else:
                parts.append(_r1c1(ref, anchor))
        elif node.kind is _Tok.IDENT:
            parts.append(node.text.upper())
        else:
            parts.append(node.text)
    return "".join(parts)


@dataclass(frozen=True)
class ContentShape:
    """Comparable content class: the cell kind plus a formula shape if any."""

    kind: CellKind
    formula_shape: str | None = None


def shape_of(content: CellContent, anchor: CellAddress) -> ContentShape:
    """Shape of a cell's content for similarity checks.

    Formulas that fail to parse fall back to their raw source as the shape,
    which keeps comparisons total (identical broken formulas stay similar).
    """
    if content.kind is not CellKind.FORMULA:
        return ContentShape(content.kind)
    try:
        return ContentShape(CellKind.FORMULA, normalize_shape(content.value, anchor))
    except FormulaError:
        return ContentShape(CellKind.FORMULA, content.value)


def similar(a: ContentShape, b: ContentShape) -> bool:
    """Same content class; formulas must also share a normalized shape."""
    if a.kind is not b.kind:
        return False
    if a.kind is CellKind.FORMULA:
        return a.formula_shape == b.formula_shape
    return True


def translate_source(source: str, dcol: int, drow: int) -> str:
    """Rewrite every relative reference axis by (dcol, drow).

    Test helper for the translation-invariance property; absolute axes are
    left untouched.
    """
    nodes = _parse_nodes(source)
    out: list[str] = []
    cursor = 0
    for node in nodes:
        if node.item is None:
            continue
        out.append(source[cursor : node.start])
        ref = node.item.ref
        if isinstance(ref, RangeRef):
            moved = RangeRef(_shift_ref(ref.start, dcol, drow), _shift_ref(ref.end, dcol, drow))
            out.append(_a1_text(moved.start) + ":" + _a1_text(moved.end, with_sheet=False))
        else:
            out.append(_a1_text(_shift_ref(ref, dcol, drow)))
        cursor = node.end
    return "".join(out) + source[cursor:]


def _shift_ref(ref: Reference, dcol: int, drow: int) -> Reference:
    return Reference(
        ref.sheet,
        ref.col if ref.col_abs else ref.col + dcol,
        ref.row if ref.row_abs else ref.row + drow,
        ref.col_abs,
        ref.row_abs,
    )


def _a1_text(ref: Reference, with_sheet: bool = True) -> str:
    prefix = _sheet_prefix(ref.sheet) if with_sheet else ""
    col = format_a1(ref.col, ref.row)
    letters = col.rstrip("0123456789")
    digits = col[len(letters) :]
    return f"{prefix}{'$' if ref.col_abs else ''}{letters}{'$' if ref.row_abs else ''}{digits}"
