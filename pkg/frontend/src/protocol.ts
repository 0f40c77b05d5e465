/** Wire protocol frames, exactly as the session service speaks them. */

export interface CommandFrame {
  type: "command";
  text: string;
  t: number;
}

export interface LoadFrame {
  type: "load";
}

export interface TickFrame {
  type: "tick";
  t: number;
}

export interface EndFrame {
  type: "end";
}

export type ClientFrame = CommandFrame | LoadFrame | TickFrame | EndFrame;

export interface ColorOverlay {
  c: string;
  cell: string;
  visible: boolean;
}

export interface ScanIndicator {
  direction: string;
  smart: boolean;
}

export interface ViewportWindow {
  sheet: string;
  col: number;
  row: number;
  cols: number;
  rows: number;
}

export interface StateFrame {
  type: "state";
  cursor: string;
  colors: ColorOverlay[];
  legend: boolean;
  dwell_ms: number;
  marks: string[];
  scan: ScanIndicator | null;
  viewport: ViewportWindow;
}

export interface EventFrame {
  type: "event";
  t: number;
  k: string;
  sheet: string | null;
  cell: string | null;
  p: string | null;
}

export interface CellDoc {
  t: "n" | "s" | "f" | "b";
  v?: string;
  fmt?: string;
}

export interface SheetDoc {
  name: string;
  cells: Record<string, CellDoc>;
}

export interface WorkbookDoc {
  sheets: SheetDoc[];
  seeded_errors?: string[];
}

export interface WorkbookFrame {
  type: "workbook";
  workbook: WorkbookDoc;
}

export interface ErrorFrame {
  type: "error";
  code: string;
  message?: string;
}

export interface EndedFrame {
  type: "ended";
  log_path: string | null;
}

export type ServerFrame =
  | StateFrame
  | EventFrame
  | WorkbookFrame
  | ErrorFrame
  | EndedFrame;

/** The seven reference colors in assignment order, with CSS values. */
export const PALETTE: ReadonlyArray<readonly [name: string, css: string]> = [
  ["blue", "#4f86f7"],
  ["green", "#53b853"],
  ["pink", "#f06eaa"],
  ["red", "#e4504e"],
  ["lime", "#b6e34b"],
  ["orange", "#f59b3c"],
  ["purple", "#9a6fd0"],
];

export function colorCss(name: string): string {
  const entry = PALETTE.find(([n]) => n === name);
  return entry ? entry[1] : "#999999";
}
