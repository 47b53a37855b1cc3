import { describe, expect, it } from "vitest";

import { EditorState, UNDO_DEPTH } from "../src/state";
import type { SosScript, SymbolTable } from "../src/types";

const table: SymbolTable = {
  root: ["Forward", "ForwardRight", "Right", "BackRight", "Back", "BackLeft", "Left", "ForwardLeft"].map(
    (name, id) => ({ id, name, vector: [0, 0, 0] }),
  ),
  limb: Array.from({ length: 26 }, (_, id) => ({
    id,
    name: id === 24 ? "Place-Low" : id === 25 ? "Place-High" : `Limb${id}`,
    vector: [0, 0, 0] as [number, number, number],
  })),
};

function freshState(numFrames = 40): EditorState {
  const s = new EditorState();
  s.setSymbolTable(table);
  s.loadScript({ fps: 20, num_frames: numFrames, entries: [] });
  return s;
}

const extracted = (entries: SosScript["entries"], numFrames = 40): SosScript => ({
  fps: 20,
  num_frames: numFrames,
  entries,
});

describe("placement validation", () => {
  it("accepts limb symbols on limb columns", () => {
    const s = freshState();
    expect(s.place("LA", 5, "Limb3")).toBeNull();
    expect(s.at("LA", 5)?.entry.symbol).toBe("Limb3");
  });

  it("rejects limb symbols on the root column with a hint", () => {
    const s = freshState();
    const err = s.place("RT", 5, "Limb3");
    expect(err).toMatch(/8 root symbols/);
    expect(s.at("RT", 5)).toBeUndefined();
  });

  it("accepts root symbols on the root column only", () => {
    const s = freshState();
    expect(s.place("RT", 5, "Forward")).toBeNull();
    expect(s.place("LA", 6, "Forward")).toMatch(/unknown limb symbol/);
  });

  it("rejects out-of-range frames", () => {
    const s = freshState(10);
    expect(s.place("LA", 10, "Limb0")).toMatch(/outside/);
    expect(s.place("LA", -1, "Limb0")).toMatch(/outside/);
  });
});

describe("undo and redo", () => {
  it("place then undo restores the previous state", () => {
    const s = freshState();
    s.place("LA", 5, "Limb3");
    expect(s.undo()).toBe(true);
    expect(s.at("LA", 5)).toBeUndefined();
    expect(s.redo()).toBe(true);
    expect(s.at("LA", 5)?.entry.symbol).toBe("Limb3");
  });

  it("supports at least 50 undo levels", () => {
    const s = freshState(120);
    for (let f = 0; f < 60; f++) s.place("LA", f, "Limb1");
    expect(s.entries()).toHaveLength(60);
    for (let k = 0; k < 50; k++) expect(s.undo()).toBe(true);
    expect(s.entries()).toHaveLength(10);
    expect(UNDO_DEPTH).toBeGreaterThanOrEqual(50);
  });

  it("a new edit clears the redo stack", () => {
    const s = freshState();
    s.place("LA", 1, "Limb1");
    s.undo();
    s.place("RA", 2, "Limb2");
    expect(s.canRedo).toBe(false);
  });
});

describe("move and remove", () => {
  it("move leaves a single entry at the target", () => {
    const s = freshState();
    s.place("LA", 10, "Limb4");
    expect(s.move("LA", 10, 20)).toBeNull();
    expect(s.at("LA", 10)).toBeUndefined();
    expect(s.at("LA", 20)?.entry.frame).toBe(20);
    expect(s.entries()).toHaveLength(1);
  });

  it("remove returns false for empty cells", () => {
    const s = freshState();
    expect(s.remove("LA", 3)).toBe(false);
    s.place("LA", 3, "Limb0");
    expect(s.remove("LA", 3)).toBe(true);
  });
});

describe("threshold re-extraction", () => {
  it("refreshes extracted entries but keeps manual ones", () => {
    const s = freshState();
    s.applyExtraction(extracted([{ part: "LA", frame: 18, symbol: "Limb19" }]));
    s.place("RA", 7, "Limb2"); // manual
    s.applyExtraction(extracted([{ part: "LL", frame: 3, symbol: "Limb8" }]));
    const symbols = s.entries().map((c) => `${c.entry.part}:${c.entry.frame}`);
    expect(symbols).toEqual(["LL:3", "RA:7"]);
    expect(s.at("RA", 7)?.origin).toBe("manual");
  });

  it("manual entry wins a collision with a re-extracted one", () => {
    const s = freshState();
    s.place("LA", 18, "Limb5");
    s.applyExtraction(extracted([{ part: "LA", frame: 18, symbol: "Limb19" }]));
    expect(s.at("LA", 18)?.entry.symbol).toBe("Limb5");
  });

  it("dirty flag tracks manual edits", () => {
    const s = freshState();
    s.applyExtraction(extracted([{ part: "LA", frame: 18, symbol: "Limb19" }]));
    expect(s.dirty).toBe(false);
    s.place("SP", 2, "Place-High");
    expect(s.dirty).toBe(true);
  });
});

describe("export", () => {
  it("never emits two entries at one (part, frame) and sorts by frame", () => {
    const s = freshState();
    s.place("LA", 9, "Limb1");
    s.place("LA", 9, "Limb2"); // replace
    s.place("RT", 2, "Left");
    const doc = s.exportScript();
    expect(doc.entries).toEqual([
      { part: "RT", frame: 2, symbol: "Left" },
      { part: "LA", frame: 9, symbol: "Limb2" },
    ]);
    expect(doc.num_frames).toBe(40);
  });
});
