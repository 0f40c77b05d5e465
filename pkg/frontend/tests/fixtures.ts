import { StateFrame, WorkbookDoc } from "../src/protocol";

/** Scripted server state: the cursor sits on a profit formula whose
 * in-view reference is green and whose cross-sheet reference is pink
 * (off view). */
export function crossSheetState(): StateFrame {
  return {
    type: "state",
    cursor: "Sales and Profit!F6",
    colors: [
      { c: "blue", cell: "Sales and Profit!D6", visible: true },
      { c: "green", cell: "Sales and Profit!E6", visible: true },
      { c: "pink", cell: "Opening Stock!D6", visible: false },
    ],
    legend: false,
    dwell_ms: 1000,
    marks: [],
    scan: null,
    viewport: { sheet: "Sales and Profit", col: 1, row: 1, cols: 12, rows: 31 },
  };
}

export function crossSheetWorkbook(): WorkbookDoc {
  return {
    sheets: [
      { name: "Opening Stock", cells: { D6: { t: "n", v: "50" } } },
      { name: "Purchases", cells: { A1: { t: "s", v: "purchases" } } },
      {
        name: "Sales and Profit",
        cells: {
          D6: { t: "n", v: "27" },
          E6: { t: "n", v: "99.99" },
          F6: { t: "f", v: "=D6*E6-D6*'Opening Stock'!D6" },
          F4: { t: "n", v: "701.73", fmt: "€" },
        },
      },
    ],
  };
}
