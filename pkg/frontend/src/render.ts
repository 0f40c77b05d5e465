/** Pure view: ViewState in, a plain node tree out.
 *
 * The tree is data, so tests compare renders structurally and the browser
 * layer just materializes it. Same state, same tree, always.
 */

import { colorCss, PALETTE, StateFrame } from "./protocol";
import {
  ViewState,
  cellAt,
  columnLetters,
  displayValue,
  parseLabel,
  splitAddress,
} from "./state";

export interface VNode {
  tag: string;
  attrs: Record<string, string>;
  children: Array<VNode | string>;
}

export function h(
  tag: string,
  attrs: Record<string, string> = {},
  ...children: Array<VNode | string>
): VNode {
  return { tag, attrs, children };
}

function headerBar(view: ViewState): VNode {
  const snap = view.snapshot;
  if (!snap) return h("div", { class: "header" }, "waiting for session state…");
  const scan = snap.scan
    ? h(
        "span",
        { class: "scan-indicator" },
        `scanning ${snap.scan.direction}${snap.scan.smart ? " (smart)" : ""}`,
      )
    : "";
  return h(
    "div",
    { class: "header" },
    h("span", { class: "cursor-label" }, snap.cursor),
    h("span", { class: "dwell" }, `dwell ${snap.dwell_ms} ms`),
    scan,
  );
}

function gridTable(view: ViewState): VNode {
  const snap = view.snapshot;
  if (!snap) return h("div", { class: "grid-placeholder" });
  const vp = snap.viewport;
  const cursor = splitAddress(snap.cursor);
  const cursorPos = parseLabel(cursor.cell);
  const fills = new Map<string, string>();
  for (const overlay of snap.colors) {
    if (!overlay.visible) continue;
    const target = splitAddress(overlay.cell);
    if (target.sheet.toLowerCase() !== vp.sheet.toLowerCase()) continue;
    const key = target.cell.toUpperCase();
    if (!fills.has(key)) fills.set(key, overlay.c);
  }
  const marks = new Set(
    snap.marks
      .map(splitAddress)
      .filter((a) => a.sheet.toLowerCase() === vp.sheet.toLowerCase())
      .map((a) => a.cell.toUpperCase()),
  );

  const headRow = h(
    "tr",
    {},
    h("th", {}, ""),
    ...range(vp.col, vp.cols).map((c) => h("th", {}, columnLetters(c))),
  );
  const rows = range(vp.row, vp.rows).map((r) =>
    h(
      "tr",
      {},
      h("th", {}, String(r)),
      ...range(vp.col, vp.cols).map((c) => {
        const label = `${columnLetters(c)}${r}`;
        const classes = ["cell"];
        const attrs: Record<string, string> = { "data-cell": label };
        const fill = fills.get(label);
        if (fill) {
          classes.push("filled");
          attrs.style = `background:${colorCss(fill)}`;
          attrs["data-color"] = fill;
        }
        if (c === cursorPos.col && r === cursorPos.row) classes.push("cursor");
        if (marks.has(label)) classes.push("marked");
        attrs.class = classes.join(" ");
        return h("td", attrs, displayValue(cellAt(view.workbook, vp.sheet, c, r)));
      }),
    ),
  );
  return h(
    "table",
    { class: "grid" },
    h("caption", {}, vp.sheet),
    headRow,
    ...rows,
  );
}

/** Corner chips for reference targets that are not on screen. */
function offscreenChips(snap: StateFrame): VNode {
  const chips = snap.colors
    .filter((overlay) => !overlay.visible)
    .map((overlay) =>
      h(
        "span",
        {
          class: "chip",
          style: `background:${colorCss(overlay.c)}`,
          "data-color": overlay.c,
          title: `${overlay.c} → ${overlay.cell}`,
        },
        "",
      ),
    );
  return h("div", { class: "chip-corner" }, ...chips);
}

function legendPanel(snap: StateFrame): VNode {
  const byColor = new Map(snap.colors.map((o) => [o.c, o.cell]));
  const entries = PALETTE.map(([name, css]) =>
    h(
      "li",
      { class: "legend-entry" },
      h("span", { class: "swatch", style: `background:${css}` }, ""),
      h("span", { class: "legend-name" }, name),
      h("span", { class: "legend-target" }, byColor.get(name) ?? ""),
    ),
  );
  return h(
    "ul",
    { class: "legend" },
    h("li", { class: "legend-title" }, "reference colours"),
    ...entries,
  );
}

function ticker(view: ViewState): VNode {
  return h(
    "ol",
    { class: "ticker" },
    ...view.ticker.slice(-12).map((line) => h("li", {}, line)),
  );
}

export function render(view: ViewState): VNode {
  const parts: Array<VNode | string> = [];
  if (!view.connected) {
    parts.push(h("div", { class: "banner disconnected" }, "connection lost — reload to reconnect"));
  }
  if (view.ended) {
    parts.push(h("div", { class: "banner ended" }, `session ended; log: ${view.ended}`));
  }
  if (view.lastError) {
    parts.push(h("div", { class: "inline-error" }, view.lastError));
  }
  parts.push(headerBar(view));
  parts.push(gridTable(view));
  if (view.snapshot) {
    parts.push(offscreenChips(view.snapshot));
    if (view.snapshot.legend) parts.push(legendPanel(view.snapshot));
  }
  parts.push(ticker(view));
  return h("div", { class: "console" + (view.busy ? " busy" : "") }, ...parts);
}

function range(start: number, count: number): number[] {
  return Array.from({ length: count }, (_, i) => start + i);
}

/** Materialize a node tree into real DOM (browser layer only). */
export function toDom(node: VNode, doc: Document): HTMLElement {
  const el = doc.createElement(node.tag);
  for (const [key, value] of Object.entries(node.attrs)) {
    el.setAttribute(key, value);
  }
  for (const child of node.children) {
    if (typeof child === "string") {
      if (child) el.appendChild(doc.createTextNode(child));
    } else {
      el.appendChild(toDom(child, doc));
    }
  }
  return el;
}

export function collect(node: VNode, predicate: (n: VNode) => boolean): VNode[] {
  const out: VNode[] = [];
  const walk = (n: VNode) => {
    if (predicate(n)) out.push(n);
    for (const child of n.children) {
      if (typeof child !== "string") walk(child);
    }
  };
  walk(node);
  return out;
}

export function byClass(node: VNode, cls: string): VNode[] {
  return collect(node, (n) => (n.attrs.class ?? "").split(" ").includes(cls));
}
