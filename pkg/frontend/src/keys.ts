/** Map a keyboard key to a selection: digits 0-9 mirror the buttons and
 * `x` stands in for -1 ("can't recognize").  Returns null for other keys. */
export function selectionForKey(key: string): number | null {
  if (key >= "0" && key <= "9" && key.length === 1) {
    return key.charCodeAt(0) - 48;
  }
  if (key === "x" || key === "X") {
    return -1;
  }
  return null;
}
