// End-to-end editor loop over a mocked service: load, raise the threshold,
// place a manual symbol, export, optimize, and check the badge value comes
// straight from the server payload.
import { describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api";
import { EditorState } from "../src/state";
import type { MotionDoc, SymbolTable } from "../src/types";

const table: SymbolTable = {
  root: ["Forward", "ForwardRight", "Right", "BackRight", "Back", "BackLeft", "Left", "ForwardLeft"].map(
    (name, id) => ({ id, name, vector: [0, 0, 0] }),
  ),
  limb: [
    { id: 19, name: "Forward-Top", vector: [0, 0.316, 0.949] },
    { id: 10, name: "Right-Middle", vector: [1, 0, 0] },
    { id: 24, name: "Place-Low", vector: [0, 0, -1] },
  ].map((r) => ({ ...r, vector: r.vector as [number, number, number] })),
};

const motion: MotionDoc = {
  fps: 20,
  skeleton: { joints: [{ name: "root", parent: null, offset: [0, 0, 0] }], roles: {} },
  frames: Array.from({ length: 25 }, () => ({
    root_t: [0, 0, 0] as [number, number, number],
    rot: [[1, 0, 0, 0] as [number, number, number, number]],
  })),
};

function mockService() {
  const extractByTheta: Record<string, unknown> = {};
  const fetchMock = vi.fn(async (url: string, init?: RequestInit) => {
    if (url.endsWith("/v1/extract")) {
      const { theta } = JSON.parse(init!.body as string) as { theta: number };
      // higher threshold keeps fewer extracted entries
      const entries =
        theta > 0.8
          ? [{ part: "LA", frame: 18, symbol: "Forward-Top" }]
          : [
              { part: "LA", frame: 18, symbol: "Forward-Top" },
              { part: "LA", frame: 4, symbol: "Place-Low" },
            ];
      extractByTheta[String(theta)] = entries;
      return new Response(
        JSON.stringify({ sos: { fps: 20, num_frames: 25, entries }, saliency: {}, global_max: 1 }),
        { status: 200 },
      );
    }
    if (url.endsWith("/v1/optimize")) {
      const body = JSON.parse(init!.body as string) as { sos: { entries: unknown[] } };
      return new Response(
        JSON.stringify({
          motion,
          sos_acc: 0.975,
          l2_rot6d: 0.12,
          loss_trace: [1, 0.5],
          converged: true,
          iterations: 2,
          echoed_entries: body.sos.entries.length,
        }),
        { status: 200 },
      );
    }
    throw new Error(`unexpected url ${url}`);
  });
  return { client: new ApiClient("", fetchMock), fetchMock };
}

describe("editor round trip", () => {
  it("load, raise theta, place, export, optimize", async () => {
    const { client } = mockService();
    const state = new EditorState();
    state.setSymbolTable(table);

    const low = await client.extract(motion, 0.5);
    state.loadScript(low.sos);
    expect(state.entries()).toHaveLength(2);

    const high = await client.extract(motion, 0.9);
    state.applyExtraction(high.sos); // raising theta drops extracted entries
    expect(state.entries()).toHaveLength(1);

    expect(state.place("RA", 5, "Right-Middle")).toBeNull();
    const exported = state.exportScript();
    expect(exported.entries).toEqual([
      { part: "RA", frame: 5, symbol: "Right-Middle" },
      { part: "LA", frame: 18, symbol: "Forward-Top" },
    ]);

    const res = await client.optimize(motion, exported, {});
    const badge = `SOS-Acc ${res.sos_acc.toFixed(3)}`;
    expect(badge).toBe("SOS-Acc 0.975"); // badge text comes from the payload
    expect(res.loss_trace.at(-1)).toBeLessThanOrEqual(res.loss_trace[0]!);
  });
});
