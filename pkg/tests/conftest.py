from __future__ import annotations

from pathlib import Path

import pytest

from gridpilot import workbook as wbmod
from gridpilot.workbook import CellContent, Sheet, Workbook, formula, number, parse_a1, text

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"


def sheet_of(name: str, cells: dict[str, CellContent]) -> Sheet:
    """Sheet from A1-labelled contents."""
    out = {}
    for label, content in cells.items():
        col, row = parse_a1(label)
        out[(col, row)] = content
    return Sheet(name, out)


def single_sheet_workbook(cells: dict[str, CellContent], name: str = "Sheet1") -> Workbook:
    return Workbook([sheet_of(name, cells)])


@pytest.fixture(scope="session")
def retail() -> Workbook:
    return wbmod.load(FIXTURES / "retail.json")


@pytest.fixture(scope="session")
def department() -> Workbook:
    return wbmod.load(FIXTURES / "department_spending.json")


@pytest.fixture
def cross_sheet_workbook() -> Workbook:
    """Minimal three-sheet workbook: the profit cell F6 references D6 and
    E6 locally plus D6 on the Opening Stock sheet two tabs away."""
    sales = sheet_of(
        "Sales and Profit",
        {
            "D6": number("27"),
            "E6": number("99.99"),
            "F6": formula("=D6*E6-D6*'Opening Stock'!D6"),
            "F4": number("701.73", fmt="€"),
            "H13": formula("=SUM(F3:F13)"),
            "B2": text("Description"),
        },
    )
    stock = sheet_of(
        "Opening Stock",
        {"D6": number("50"), **{f"A{r}": number(str(r)) for r in range(1, 6)}},
    )
    middle = sheet_of("Purchases", {"A1": text("purchases")})
    return Workbook([stock, middle, sales])
