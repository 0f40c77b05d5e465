/** Command vocabulary for autocomplete and the shortcut buttons. */

const COLORS = ["blue", "green", "pink", "red", "lime", "orange", "purple"];
const DIRECTIONS = ["up", "down", "left", "right"];

export const COMMANDS: string[] = [
  ...COLORS.map((c) => `jump ${c}`),
  "jump back",
  ...DIRECTIONS.map((d) => `jump ${d}`),
  ...DIRECTIONS.map((d) => `scan ${d}`),
  "stop",
  "show colours",
  "hide colours",
  "speed up",
  "slow down",
  "mark error",
  "unmark error",
];

/** Buttons shown under the command box; a click sends the command as-is. */
export const SHORTCUTS: string[] = [
  "jump back",
  "scan down",
  "scan right",
  "stop",
  "speed up",
  "slow down",
  "mark error",
  "unmark error",
  "show colours",
  "hide colours",
];

export function complete(prefix: string, limit = 8): string[] {
  const needle = prefix.trim().toLowerCase();
  if (!needle) return [];
  return COMMANDS.filter((c) => c.startsWith(needle) && c !== needle).slice(0, limit);
}
