import type { Part } from "./types.js";
import { PARTS } from "./types.js";

// layout constants mirroring the server's SVG renderer
export const MARGIN_LEFT = 34;
export const MARGIN_TOP = 26;

export interface StaffGeometry {
  numFrames: number;
  pixelsPerFrame: number;
  columnWidth: number;
}

/** Map a click inside the rendered staff SVG to its (part, frame) cell. */
export function staffHitTest(
  x: number,
  y: number,
  geo: StaffGeometry,
): { part: Part; frame: number } | null {
  const col = Math.floor((x - MARGIN_LEFT) / geo.columnWidth);
  if (col < 0 || col >= PARTS.length) return null;
  const row = Math.floor((y - MARGIN_TOP) / geo.pixelsPerFrame);
  if (row < 0 || row >= geo.numFrames) return null;
  // frame 0 sits at the bottom of the staff
  const frame = geo.numFrames - 1 - row;
  return { part: PARTS[col]!, frame };
}

export function cellCenter(
  part: Part,
  frame: number,
  geo: StaffGeometry,
): { x: number; y: number } {
  const col = PARTS.indexOf(part);
  return {
    x: MARGIN_LEFT + (col + 0.5) * geo.columnWidth,
    y: MARGIN_TOP + (geo.numFrames - 1 - frame + 0.5) * geo.pixelsPerFrame,
  };
}
