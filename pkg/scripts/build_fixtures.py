#!/usr/bin/env python3
"""Build the example workbooks used by tests, demos, and the docs.

fixtures/retail.json
    Three-sheet stock/profit workbook (Opening Stock, Purchases, Sales and
    Profit) for an 18-product clothing retailer: per-product profit is
    units sold x (retail price - opening cost), with one live cross-sheet
    formula at Sales and Profit!F6 and SUM totals per department. Seeded
    with 18 errors (value typos, mismatched ids/descriptions, a missing
    price, a wrong-operator formula).

fixtures/department_spending.json
    Three-sheet department costing workbook (Wages, Expenses, 2007
    Department Spending) apportioning company-wide expenses by headcount,
    with SUMIF roll-ups across sheets. Seeded with 12 errors.
"""

from __future__ import annotations

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from gridpilot.workbook import Sheet, Workbook, dumps, formula, number, parse_address, text

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

EURO = "€"


def _rows(sheet: dict, start_row: int, columns: str, rows: list[list]) -> None:
    for r, values in enumerate(rows, start=start_row):
        for col_letter, value in zip(columns, values):
            if value is None:
                continue
            sheet[f"{col_letter}{r}"] = text(value) if isinstance(value, str) else value


def build_retail() -> Workbook:
    opening: dict[str, object] = {}
    _rows(
        opening,
        2,
        "ABCDEFG",
        [
            ["Product ID", "Description", "Department", "Cost Price", "Units in Stock",
             "Stock Value", "Value of Department"],
        ],
    )
    # (id, description, dept, cost, units, stock-value override)
    stock_rows = [
        (12150, "Foot Jumpers", 1, "20", "20", None),       # description seed (Farah Jumper)
        (12151, "Farah Trousers", 1, "19", "15", None),
        (12152, "Levi Jeans", 1, "35", "8", None),
        (12153, "Levi Jacket", 1, "50", "7", None),
        (12154, "Wrangler Texas Jeans", 1, "25", "35", None),
        (12155, "Wrangler Ohio Jeans", 1, "27", "83", None),
        (12159, "Wrangler jacket", 1, "40", "10", "75"),    # id and value seeds
        (12157, "Wrangler T-Shirt", 1, "7.5", "17", None),
        (12158, "Wrangler Storm T-Shirt", 1, "12.5", "16", None),
        (12160, "Jack and Jones Jeans", 1, "18", "44", None),  # description seed (TDK Jeans)
        (12159, "TDK Jeans", 1, "22", "70", None),
    ]
    for r, (pid, desc, dept, cost, units, override) in enumerate(stock_rows, start=3):
        opening[f"A{r}"] = number(str(pid))
        opening[f"B{r}"] = text(desc)
        opening[f"C{r}"] = number(str(dept))
        opening[f"D{r}"] = number(cost)
        opening[f"E{r}"] = number(units)
        opening[f"F{r}"] = number(override) if override else formula(f"=D{r}*E{r}")
    opening["G13"] = formula("=SUM(F3:F13)")  # 7165.5 with the seeded 75
    children_rows = [
        (12161, "Boyo Trousers (childrens)", 2, "6.5", "77", None),
        (12162, "Child's Tracksuit", 2, "14", "63", None),
        (12163, "Child's Jacket", 2, "10", "24", None),
        (12164, "Child's Tie", 2, "0.5", "39", None),
        (12165, "Child's school jumper", 2, "6", "26", None),
        (12166, "Virginian Shirt (Childrens)", 2, "2.5", "27", "328482"),  # value seed
        (12167, "A-Student Shirts", 2, "3", "35", None),
        (12168, "School jacket", 2, "8.5", "24", None),
    ]
    for r, (pid, desc, dept, cost, units, override) in enumerate(children_rows, start=16):
        opening[f"A{r}"] = number(str(pid))
        opening[f"B{r}"] = text(desc)
        opening[f"C{r}"] = number(str(dept))
        opening[f"D{r}"] = number(cost)
        opening[f"E{r}"] = number(units)
        opening[f"F{r}"] = number(override) if override else formula(f"=D{r}*E{r}")
    opening["G23"] = formula("=SUM(F16:F23)")

    purchases: dict[str, object] = {}
    _rows(
        purchases,
        2,
        "ABCDE",
        [["Product ID", "Description", "Units Purchased", "Cost Price", "Purchase Value"]],
    )
    purchase_rows = [
        (12150, "Farah Jumper", "25", "20"),
        (12151, "Farah Trousers", "30", "19"),
        (12152, "Levi Jeans", "36", "35"),
        (12153, "Levi Jacket", "30", "50"),
        (12154, "Wrangler Texas Jeans", "40", "25"),
        (12155, "Wrangler Ohio Jeans", "160", "27"),
        (12156, "Wrangler Jacket", "30", "40"),
        (12157, "Wrangler T-Shirt", "30", "7.5"),
        (12158, "Wrangler Storm Tee", "20", "12.5"),      # description seed
        (12159, "Jack and Jones Jeans", "30", "18"),
        (12160, "TDK Jeans", "35", "22"),
        (12161, "Boyo Trousers (childrens)", "120", "6.5"),
        (12162, "Child's Tracksuit", "40", "41"),         # cost seed (should be 14)
        (12163, "Child's Jacket", "30", "10"),
        (12164, "Child's Tie", "45", "0.5"),
        (12165, "Child's school jumper", "90", "6"),
        (12176, "Virginian Shirt (Childrens)", "60", "2.5"),  # id seed
        (12167, "A-Student Shirts", "60", "3"),
    ]
    for r, (pid, desc, units, cost) in enumerate(purchase_rows, start=3):
        purchases[f"A{r}"] = number(str(pid))
        purchases[f"B{r}"] = text(desc)
        purchases[f"C{r}"] = number(units)
        purchases[f"D{r}"] = number(cost)
        purchases[f"E{r}"] = formula(f"=C{r}*D{r}")
    purchases["E8"] = number("4050")                      # value seed (160*27=4320)
    purchases["E20"] = formula("=C20+D20")                # formula seed (+ for *)
    purchases["E21"] = formula("=SUM(E3:E20)")

    sales: dict[str, object] = {}
    _rows(
        sales,
        2,
        "ABCDEFGH",
        [["Product ID", "Description", "Closing Stock", "Unts sold", "Retail Price",
          "Profit", None, "Profit per department"]],
    )
    # (id, description, closing, sold, retail, profit-display)
    sales_rows = [
        (12150, "Farah Jumper", "10", "30", None, "249.90"),       # blank price + profit seeds
        (12151, "Farah Trousers", "8", "27", "44.99", "701.73"),
        (12152, "Levi Jeans", "5", "33", "69.99", "1154.67"),
        (12153, "Levi Jacket", "0", "27", "99.99", None),          # F6 is the live formula
        (12154, "Wrangler Texas Jeans", "38", "37", "44.99", "2589.63"),  # profit seed
        (12155, "Wrangler Ohio Jeans", "34", "157", "44.99", "2824.43"),  # units seed
        (12156, "Wrangler Jacket", "11", "29", "79.99", "1159.71"),
        (12157, "Wrangler T-Shirt", "24", "28", "12.99", "153.72"),
        (12158, "Wrangler Storm T-Shirt", "18", "18", "17.99", "153.72"),  # profit seed
        (12159, "Jack and Jones Jeans", "66", "26", "39.99", "615.72"),
        (12160, "TDK Jeans", "78", "42", "39.99", "755.58"),
    ]
    for r, (pid, desc, closing, sold, retail, profit) in enumerate(sales_rows, start=3):
        sales[f"A{r}"] = number(str(pid))
        sales[f"B{r}"] = text(desc)
        sales[f"C{r}"] = number(closing)
        sales[f"D{r}"] = number(sold)
        if retail is not None:
            sales[f"E{r}"] = number(retail)
        if profit is not None:
            sales[f"F{r}"] = number(profit, fmt=EURO)
    sales["F6"] = formula("=D6*E6-D6*'Opening Stock'!D6")
    sales["H13"] = formula("=SUM(F3:F13)")
    children_sales = [
        (12161, "Boyo Trousers (childrens)", "58", "99", "11.99", "543.51"),
        (12162, "Child's Tracksuit", "88", "45", "27.99", "629.55"),
        (12163, "Child's Jacket", "27", "27", "16.99", "188.73"),
        (12164, "Child's Tie", "6", "42", "1.5", "42.00"),
        (12165, "Child's school jumper", "10", "86", "14.99", "73.14"),   # profit seed
        (12166, "Virginian Shirt (Childrens)", "0", "57", "6.5", "228.00"),
        (12167, "A-Student Shirts", "30", "55", "7.5", "247.50"),
        (12168, "School jacket", "41", "23", "24.99", "379.27"),
    ]
    for r, (pid, desc, closing, sold, retail, profit) in enumerate(children_sales, start=16):
        sales[f"A{r}"] = number(str(pid))
        sales[f"B{r}"] = text(desc)
        sales[f"C{r}"] = number(closing)
        sales[f"D{r}"] = number(sold)
        sales[f"E{r}"] = number(retail)
        sales[f"F{r}"] = number(profit, fmt=EURO)
    sales["H23"] = formula("=SUM(F16:F23)")
    sales["E25"] = text("Total Profit")
    sales["H25"] = formula("=H13+H23")

    def _sheet(name: str, cells: dict[str, object]) -> Sheet:
        out = {}
        for label, content in cells.items():
            addr = parse_address(f"{name}!{label}")
            out[(addr.col, addr.row)] = content
        return Sheet(name, out)

    seeded = [
        "Sales and Profit!E3",
        "Sales and Profit!F3",
        "Sales and Profit!F7",
        "Sales and Profit!D8",
        "Sales and Profit!F11",
        "Sales and Profit!F20",
        "Opening Stock!B3",
        "Opening Stock!A9",
        "Opening Stock!F9",
        "Opening Stock!B12",
        "Opening Stock!F21",
        "Purchases!B11",
        "Purchases!E8",
        "Purchases!D15",
        "Purchases!A19",
        "Purchases!E20",
        "Purchases!C14",
        "Purchases!D9",
    ]
    return Workbook(
        [
            _sheet("Opening Stock", opening),
            _sheet("Purchases", purchases),
            _sheet("Sales and Profit", sales),
        ],
        seeded_errors={parse_address(s) for s in seeded},
    )


def build_department_spending() -> Workbook:
    wages: dict[str, object] = {}
    _rows(wages, 2, "ABC", [["Employee", "Department", "Annual Wage"]])
    wage_rows = [
        ("A. Byrne", "Sales", "32000"),
        ("C. Dunne", "Sales", "29500"),
        ("E. Farrell", "Sales", "31250"),
        ("G. Hughes", "Sales", "302500"),        # wage seed (extra digit)
        ("I. Kelly", "Production", "27800"),
        ("K. Lynch", "Production", "28400"),
        ("M. Nolan", "Production", "27800"),
        ("O. Power", "Production", "29100"),
        ("Q. Ryan", "Production", "26900"),
        ("S. Troy", "Admin", "24750"),           # department seed (Administration)
        ("U. Walsh", "Administration", "25300"),
        ("W. Young", "Administration", "26100"),
    ]
    for r, (name_, dept, wage) in enumerate(wage_rows, start=3):
        wages[f"A{r}"] = text(name_)
        wages[f"B{r}"] = text(dept)
        wages[f"C{r}"] = number(wage)
    wages["B16"] = text("Total")
    wages["C16"] = formula("=SUM(C3:C13)")       # formula seed (misses row 14)

    expenses: dict[str, object] = {}
    _rows(expenses, 2, "ABC", [["Expense", "Department", "Amount"]])
    expense_rows = [
        ("Travel", "Sales", "8400"),
        ("Client entertainment", "Sales", "5150"),
        ("Machine maintenance", "Production", "12600"),
        ("Raw material waste", "Production", "7300"),
        ("Stationery", "Administration", "1250"),
        ("Software licences", "Administration", "46800"),   # amount seed (4680)
        ("Rent", "Company", "38000"),
        ("Insurance", "Company", "9500"),
        ("Heating and light", "Company", "7400"),
        ("Cleaning", "Sales", "2100"),            # department seed (Company)
    ]
    for r, (what, dept, amount) in enumerate(expense_rows, start=3):
        expenses[f"A{r}"] = text(what)
        expenses[f"B{r}"] = text(dept)
        expenses[f"C{r}"] = number(amount)
    expenses["B14"] = text("Company-wide total")
    expenses["C14"] = formula('=SUMIF(B3:B12,"Company",C3:C12)')

    spending: dict[str, object] = {}
    _rows(
        spending,
        2,
        "ABCDE",
        [["Department", "Wages", "Expenses", "Apportioned", "Total"]],
    )
    spending["A3"] = text("Sales")
    spending["B3"] = formula('=SUMIF(Wages!B3:B14,"Sales",Wages!C3:C14)')
    spending["C3"] = formula('=SUMIF(Expenses!B3:B12,"Sales",Expenses!C3:C12)')
    spending["D3"] = formula("=Expenses!C14*4/12")
    spending["E3"] = formula("=B3+C3+D3")
    spending["A4"] = text("Production")
    spending["B4"] = formula('=SUMIF(Wages!B3:B14,"Production",Wages!C3:C14)')
    spending["C4"] = formula('=SUMIF(Expenses!B3:B12,"Production",Expenses!C3:C12)')
    spending["D4"] = formula("=Expenses!C14*5/12")
    spending["E4"] = formula("=B4+C4-D4")        # formula seed (minus for plus)
    spending["A5"] = text("Administration")
    spending["B5"] = formula('=SUMIF(Wages!B3:B14,"Administration",Wages!C3:C14)')
    spending["C5"] = formula('=SUMIF(Expenses!B3:B12,"Administration",Expenses!C3:C12)')
    spending["D5"] = formula("=Expenses!C14*4/12")   # apportionment seed (3 admins, not 4)
    spending["E5"] = formula("=B5+C5+D5")
    spending["A7"] = text("Company total")
    spending["E7"] = formula("=SUM(E3:E5)")

    def _sheet(name: str, cells: dict[str, object]) -> Sheet:
        out = {}
        for label, content in cells.items():
            addr = parse_address(f"{name}!{label}")
            out[(addr.col, addr.row)] = content
        return Sheet(name, out)

    seeded = [
        "Wages!C6",
        "Wages!B12",
        "Wages!C16",
        "Expenses!C8",
        "Expenses!B12",
        "2007 Department Spending!E4",
        "2007 Department Spending!D5",
        "2007 Department Spending!B3",
        "2007 Department Spending!C4",
        "Wages!C9",
        "Expenses!C5",
        "2007 Department Spending!D3",
    ]
    return Workbook(
        [
            _sheet("Wages", wages),
            _sheet("Expenses", expenses),
            _sheet("2007 Department Spending", spending),
        ],
        seeded_errors={parse_address(s) for s in seeded},
    )


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)
    retail = build_retail()
    (FIXTURES / "retail.json").write_text(dumps(retail) + "\n", encoding="utf-8")
    print(f"wrote fixtures/retail.json ({len(retail.sheets)} sheets, "
          f"{len(retail.seeded_errors)} seeded errors)")
    dept = build_department_spending()
    (FIXTURES / "department_spending.json").write_text(dumps(dept) + "\n", encoding="utf-8")
    print(f"wrote fixtures/department_spending.json ({len(dept.sheets)} sheets, "
          f"{len(dept.seeded_errors)} seeded errors)")


if __name__ == "__main__":
    main()
