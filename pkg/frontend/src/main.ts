import { ApiClient, ApiError } from "./api.js";
import { debounce } from "./debounce.js";
import { drawStickFigure, projectFront, projectSide } from "./skeleton.js";
import { staffHitTest } from "./staff.js";
import { EditorState } from "./state.js";
import type { MotionDoc, OptimizeResponse, Part, SymbolTable } from "./types.js";

const api = new ApiClient();
const state = new EditorState();

let motion: MotionDoc | null = null;
let table: SymbolTable | null = null;
let selectedSymbol: string | null = null;
let lastResult: OptimizeResponse | null = null;

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
};

function banner(message: string): void {
  const el = $("banner");
  el.textContent = message;
  el.style.display = "block";
  el.onclick = () => (el.style.display = "none");
}

async function refreshStaff(): Promise<void> {
  const svg = await api.render(state.exportScript());
  $("staff").innerHTML = svg;
  $("entry-count").textContent = `${state.entries().length} entries`;
  const staffSvg = $("staff").querySelector("svg");
  if (staffSvg) attachStaffHandlers(staffSvg as unknown as SVGSVGElement);
}

function attachStaffHandlers(svg: SVGSVGElement): void {
  const geo = { numFrames: state.numFrames, pixelsPerFrame: 6, columnWidth: 40 };
  const hit = (ev: MouseEvent) => {
    const rect = svg.getBoundingClientRect();
    return staffHitTest(ev.clientX - rect.left, ev.clientY - rect.top, geo);
  };
  svg.addEventListener("click", (ev) => {
    const cell = hit(ev);
    if (!cell || !selectedSymbol) return;
    const occupied = state.at(cell.part, cell.frame);
    if (occupied && !confirm(`Replace ${occupied.entry.symbol} at frame ${cell.frame}?`)) return;
    const err = state.place(cell.part, cell.frame, selectedSymbol);
    if (err) banner(err);
    else void refreshStaff();
  });
  svg.addEventListener("contextmenu", (ev) => {
    ev.preventDefault();
    const cell = hit(ev);
    if (cell && state.remove(cell.part, cell.frame)) void refreshStaff();
  });
  svg.addEventListener("dragover", (ev) => ev.preventDefault());
  svg.addEventListener("drop", (ev) => {
    ev.preventDefault();
    const symbol = ev.dataTransfer?.getData("text/soskit-symbol");
    const cell = hit(ev);
    if (!symbol || !cell) return;
    const err = state.place(cell.part, cell.frame, symbol);
    if (err) banner(err);
    else void refreshStaff();
  });
}

function buildPalette(t: SymbolTable): void {
  const palette = $("palette");
  palette.innerHTML = "";
  const addGroup = (label: string, names: string[]) => {
    const h = document.createElement("h3");
    h.textContent = label;
    palette.appendChild(h);
    for (const name of names) {
      const chip = document.createElement("button");
      chip.textContent = name;
      chip.className = "chip";
      chip.draggable = true;
      chip.addEventListener("dragstart", (ev) =>
        ev.dataTransfer?.setData("text/soskit-symbol", name),
      );
      chip.addEventListener("click", () => {
        selectedSymbol = name;
        palette.querySelectorAll(".chip").forEach((c) => c.classList.remove("selected"));
        chip.classList.add("selected");
      });
      palette.appendChild(chip);
    }
  };
  addGroup("Root", t.root.map((r) => r.name));
  addGroup("Limb", t.limb.map((r) => r.name));
}

async function extractAt(theta: number): Promise<void> {
  if (!motion) return;
  try {
    const res = await api.extract(motion, theta);
    if (state.numFrames === 0) state.loadScript(res.sos);
    else state.applyExtraction(res.sos);
    drawSaliency(res.saliency, res.global_max);
    await refreshStaff();
  } catch (e) {
    banner(e instanceof ApiError ? `server: ${e.message}` : String(e));
  }
}

const debouncedExtract = debounce((theta: number) => void extractAt(theta), 150);

function drawSaliency(tracks: Record<Part, number[]>, globalMax: number): void {
  const canvas = $("saliency") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const parts = Object.keys(tracks) as Part[];
  const colW = canvas.width / parts.length;
  parts.forEach((part, i) => {
    const s = tracks[part];
    const T = s.length;
    s.forEach((v, f) => {
      const alpha = globalMax > 0 ? v / globalMax : 0;
      if (alpha <= 0) return;
      ctx.fillStyle = `rgba(200,40,40,${alpha.toFixed(3)})`;
      const y = ((T - 1 - f) / T) * canvas.height;
      ctx.fillRect(i * colW, y, colW - 2, Math.max(1, canvas.height / T));
    });
  });
}

function drawPreview(doc: MotionDoc, frame: number, frontId: string, sideId: string): void {
  for (const [id, project] of [
    [frontId, projectFront],
    [sideId, projectSide],
  ] as const) {
    const canvas = $(id) as HTMLCanvasElement;
    const ctx = canvas.getContext("2d");
    if (!ctx) continue;
    ctx.clearRect(0, 0, canvas.width, canvas.height);
    drawStickFigure(ctx, doc, frame, project, {
      width: canvas.width,
      height: canvas.height,
      scale: 80,
    });
  }
}

function drawSparkline(trace: number[]): void {
  const canvas = $("sparkline") as HTMLCanvasElement;
  const ctx = canvas.getContext("2d");
  if (!ctx || trace.length === 0) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const max = Math.max(...trace, 1e-12);
  ctx.strokeStyle = "#36c";
  ctx.beginPath();
  trace.forEach((v, i) => {
    const x = (i / Math.max(1, trace.length - 1)) * canvas.width;
    const y = canvas.height - (v / max) * (canvas.height - 4) - 2;
    if (i === 0) ctx.moveTo(x, y);
    else ctx.lineTo(x, y);
  });
  ctx.stroke();
}

async function runOptimize(): Promise<void> {
  if (!motion) return;
  const button = $("optimize") as HTMLButtonElement;
  button.disabled = true;
  try {
    const res = await api.optimize(motion, state.exportScript());
    lastResult = res;
    $("acc-badge").textContent = `SOS-Acc ${res.sos_acc.toFixed(3)}`;
    $("l2-badge").textContent = `L2-Rot6D ${res.l2_rot6d.toFixed(3)}`;
    drawSparkline(res.loss_trace);
    const frame = Number(($("scrub") as HTMLInputElement).value);
    drawPreview(res.motion, Math.min(frame, res.motion.frames.length - 1), "result-front", "result-side");
    $("result-panel").style.display = "block";
  } catch (e) {
    banner(e instanceof ApiError ? `server: ${e.message}` : String(e));
  } finally {
    button.disabled = false;
  }
}

function wireUp(): void {
  $("motion-file").addEventListener("change", (ev) => {
    const input = ev.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    void file.text().then(async (text) => {
      try {
        motion = JSON.parse(text) as MotionDoc;
        state.loadScript({ fps: motion.fps, num_frames: motion.frames.length, entries: [] });
        await extractAt(state.theta);
        const scrub = $("scrub") as HTMLInputElement;
        scrub.max = String(motion.frames.length - 1);
        drawPreview(motion, 0, "orig-front", "orig-side");
      } catch (e) {
        banner(`could not load motion: ${String(e)}`);
      }
    });
  });

  const slider = $("theta") as HTMLInputElement;
  slider.addEventListener("input", () => {
    state.theta = Number(slider.value);
    $("theta-value").textContent = state.theta.toFixed(2);
    debouncedExtract(state.theta);
  });

  $("scrub").addEventListener("input", () => {
    const frame = Number(($("scrub") as HTMLInputElement).value);
    if (motion) drawPreview(motion, frame, "orig-front", "orig-side");
    if (lastResult) drawPreview(lastResult.motion, frame, "result-front", "result-side");
  });

  $("undo").addEventListener("click", () => state.undo() && void refreshStaff());
  $("redo").addEventListener("click", () => state.redo() && void refreshStaff());
  $("optimize").addEventListener("click", () => void runOptimize());
  $("accept").addEventListener("click", () => {
    if (!lastResult) return;
    motion = lastResult.motion;
    drawPreview(motion, 0, "orig-front", "orig-side");
    $("result-panel").style.display = "none";
  });
  $("discard").addEventListener("click", () => {
    $("result-panel").style.display = "none";
  });
  $("export").addEventListener("click", () => {
    const blob = new Blob([JSON.stringify(state.exportScript(), null, 2)], {
      type: "application/json",
    });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "sos.json";
    a.click();
  });
}

async function init(): Promise<void> {
  wireUp();
  try {
    table = await api.symbols();
    state.setSymbolTable(table);
    buildPalette(table);
  } catch {
    banner("soskit service unreachable; start it with `soskit serve`");
  }
}

void init();
