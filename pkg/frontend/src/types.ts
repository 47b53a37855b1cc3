export const PARTS = ["RT", "LA", "LL", "RL", "RA", "SP"] as const;
export type Part = (typeof PARTS)[number];

export interface SosEntry {
  part: Part;
  frame: number;
  symbol: string;
}

export interface SosScript {
  fps: number;
  num_frames: number;
  entries: SosEntry[];
  text?: string;
}

export interface SymbolRow {
  id: number;
  name: string;
  vector: [number, number, number];
}

export interface SymbolTable {
  root: SymbolRow[];
  limb: SymbolRow[];
}

export interface MotionJoint {
  name: string;
  parent: number | null;
  offset: [number, number, number];
}

export interface MotionFrame {
  root_t: [number, number, number];
  rot: [number, number, number, number][]; // (w, x, y, z) per joint
}

export interface MotionDoc {
  fps: number;
  skeleton: { joints: MotionJoint[]; roles: Record<string, string> };
  frames: MotionFrame[];
}

export interface ExtractResponse {
  sos: SosScript;
  saliency: Record<Part, number[]>;
  global_max: number;
  dense_symbols: number[][];
}

export interface OptimizeResponse {
  motion: MotionDoc;
  sos_acc: number;
  l2_rot6d: number;
  loss_trace: number[];
  converged: boolean;
  iterations: number;
}
