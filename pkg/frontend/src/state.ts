import type { Part, SosEntry, SosScript, SymbolTable } from "./types.js";
import { PARTS } from "./types.js";

export const UNDO_DEPTH = 100; // contract is >= 50

export type Origin = "extracted" | "manual";

export interface Cell {
  entry: SosEntry;
  origin: Origin;
}

interface Snapshot {
  cells: Map<string, Cell>;
}

const key = (part: Part, frame: number) => `${part}:${frame}`;

function cloneCells(cells: Map<string, Cell>): Map<string, Cell> {
  const out = new Map<string, Cell>();
  for (const [k, c] of cells) out.set(k, { entry: { ...c.entry }, origin: c.origin });
  return out;
}

/**
 * Pure editor model: the staff's cells plus undo/redo history. Every placed
 * symbol name must come from the server's symbol table; the root column only
 * accepts the eight root symbols, limb columns only limb symbols.
 */
export class EditorState {
  fps = 20;
  numFrames = 0;
  theta = 0.9;

  private cells = new Map<string, Cell>();
  private undoStack: Snapshot[] = [];
  private redoStack: Snapshot[] = [];
  private rootNames = new Set<string>();
  private limbNames = new Set<string>();

  setSymbolTable(table: SymbolTable): void {
    this.rootNames = new Set(table.root.map((r) => r.name));
    this.limbNames = new Set(table.limb.map((r) => r.name));
  }

  loadScript(script: SosScript): void {
    this.fps = script.fps;
    this.numFrames = script.num_frames;
    this.cells = new Map();
    this.undoStack = [];
    this.redoStack = [];
    for (const e of script.entries) {
      this.cells.set(key(e.part, e.frame), { entry: { ...e }, origin: "extracted" });
    }
  }

  /** Re-extraction at a new threshold: extracted cells refresh, manual stay. */
  applyExtraction(script: SosScript): void {
    this.checkpoint();
    const manual = new Map<string, Cell>();
    for (const [k, c] of this.cells) if (c.origin === "manual") manual.set(k, c);
    const next = new Map<string, Cell>();
    for (const e of script.entries) {
      next.set(key(e.part, e.frame), { entry: { ...e }, origin: "extracted" });
    }
    for (const [k, c] of manual) next.set(k, c); // manual edits win collisions
    this.cells = next;
    this.numFrames = script.num_frames;
    this.fps = script.fps;
  }

  validateSymbol(part: Part, symbol: string): string | null {
    if (!PARTS.includes(part)) return `unknown part ${part}`;
    if (part === "RT") {
      return this.rootNames.has(symbol)
        ? null
        : `the root column accepts only the 8 root symbols, not ${symbol}`;
    }
    return this.limbNames.has(symbol) ? null : `unknown limb symbol ${symbol}`;
  }

  place(part: Part, frame: number, symbol: string): string | null {
    const err = this.validateSymbol(part, symbol);
    if (err) return err;
    if (frame < 0 || frame >= this.numFrames) return `frame ${frame} outside the staff`;
    this.checkpoint();
    this.cells.set(key(part, frame), { entry: { part, frame, symbol }, origin: "manual" });
    return null;
  }

  remove(part: Part, frame: number): boolean {
    if (!this.cells.has(key(part, frame))) return false;
    this.checkpoint();
    this.cells.delete(key(part, frame));
    return true;
  }

  move(part: Part, fromFrame: number, toFrame: number): string | null {
    const cell = this.cells.get(key(part, fromFrame));
    if (!cell) return `no entry at ${part} frame ${fromFrame}`;
    if (toFrame < 0 || toFrame >= this.numFrames) return `frame ${toFrame} outside the staff`;
    this.checkpoint();
    this.cells.delete(key(part, fromFrame));
    this.cells.set(key(part, toFrame), {
      entry: { ...cell.entry, frame: toFrame },
      origin: "manual",
    });
    return null;
  }

  at(part: Part, frame: number): Cell | undefined {
    return this.cells.get(key(part, frame));
  }

  entries(): Cell[] {
    return [...this.cells.values()].sort(
      (a, b) => a.entry.frame - b.entry.frame || a.entry.part.localeCompare(b.entry.part),
    );
  }

  get dirty(): boolean {
    return [...this.cells.values()].some((c) => c.origin === "manual");
  }

  exportScript(): SosScript {
    return {
      fps: this.fps,
      num_frames: this.numFrames,
      entries: this.entries().map((c) => ({ ...c.entry })),
    };
  }

  private checkpoint(): void {
    this.undoStack.push({ cells: cloneCells(this.cells) });
    if (this.undoStack.length > UNDO_DEPTH) this.undoStack.shift();
    this.redoStack = [];
  }

  get canUndo(): boolean {
    return this.undoStack.length > 0;
  }

  get canRedo(): boolean {
    return this.redoStack.length > 0;
  }

  undo(): boolean {
    const prev = this.undoStack.pop();
    if (!prev) return false;
    this.redoStack.push({ cells: this.cells });
    this.cells = prev.cells;
    return true;
  }

  redo(): boolean {
    const next = this.redoStack.pop();
    if (!next) return false;
    this.undoStack.push({ cells: this.cells });
    this.cells = next.cells;
    return true;
  }
}
