/** Client view state: a verbatim mirror of the last server messages.
 *
 * No navigation logic lives here; the reducers only store what the server
 * said and keep a short event ticker. Rendering is a pure function of this
 * object.
 */

import {
  CellDoc,
  EventFrame,
  ServerFrame,
  StateFrame,
  WorkbookDoc,
} from "./protocol";

export interface ViewState {
  workbook: WorkbookDoc | null;
  snapshot: StateFrame | null;
  ticker: string[];
  connected: boolean;
  /** true between sending a command and receiving the next snapshot */
  busy: boolean;
  lastError: string | null;
  ended: string | null;
}

export const TICKER_LIMIT = 40;

export function initialView(): ViewState {
  return {
    workbook: null,
    snapshot: null,
    ticker: [],
    connected: true,
    busy: false,
    lastError: null,
    ended: null,
  };
}

function tickerLine(ev: EventFrame): string {
  const at = (ev.t / 1000).toFixed(2).padStart(7);
  const where = ev.sheet && ev.cell ? ` ${ev.sheet}!${ev.cell}` : "";
  const payload = ev.p ? ` ${ev.p}` : "";
  return `${at}s ${ev.k}${where}${payload}`;
}

export function applyFrame(view: ViewState, frame: ServerFrame): ViewState {
  switch (frame.type) {
    case "workbook":
      return { ...view, workbook: frame.workbook };
    case "state":
      return { ...view, snapshot: frame, busy: false };
    case "event":
      return {
        ...view,
        ticker: [...view.ticker, tickerLine(frame)].slice(-TICKER_LIMIT),
      };
    case "error":
      return { ...view, lastError: frame.code };
    case "ended":
      return { ...view, ended: frame.log_path ?? "(not persisted)", busy: false };
  }
}

export function markBusy(view: ViewState): ViewState {
  return { ...view, busy: true, lastError: null };
}

export function markDisconnected(view: ViewState): ViewState {
  return { ...view, connected: false, busy: false };
}

// -- grid lookup helpers ------------------------------------------------------

export function columnLetters(col: number): string {
  let out = "";
  while (col > 0) {
    const rem = (col - 1) % 26;
    out = String.fromCharCode(65 + rem) + out;
    col = (col - 1 - rem) / 26;
  }
  return out;
}

export function cellAt(
  workbook: WorkbookDoc | null,
  sheet: string,
  col: number,
  row: number,
): CellDoc | null {
  if (!workbook) return null;
  const fold = sheet.toLowerCase();
  const found = workbook.sheets.find((s) => s.name.toLowerCase() === fold);
  if (!found) return null;
  return found.cells[`${columnLetters(col)}${row}`] ?? null;
}

export function displayValue(cell: CellDoc | null): string {
  if (!cell || cell.t === "b") return "";
  if (cell.t === "f") return cell.v ?? "";
  const value = cell.v ?? "";
  return cell.fmt ? `${cell.fmt}${value}` : value;
}

/** Split "Sales and Profit!F4" at the last '!' into sheet and cell label. */
export function splitAddress(text: string): { sheet: string; cell: string } {
  const idx = text.lastIndexOf("!");
  return { sheet: text.slice(0, idx), cell: text.slice(idx + 1) };
}

export function parseLabel(label: string): { col: number; row: number } {
  const match = /^([A-Za-z]+)([0-9]+)$/.exec(label);
  if (!match) return { col: 0, row: 0 };
  let col = 0;
  for (const ch of match[1].toUpperCase()) {
    col = col * 26 + (ch.charCodeAt(0) - 64);
  }
  return { col, row: parseInt(match[2], 10) };
}
