import type { MotionDoc } from "./types.js";

export type Vec3 = [number, number, number];

function quatToMatrix(q: [number, number, number, number]): number[] {
  const [w, x, y, z] = q;
  return [
    1 - 2 * (y * y + z * z),
    2 * (x * y - w * z),
    2 * (x * z + w * y),
    2 * (x * y + w * z),
    1 - 2 * (x * x + z * z),
    2 * (y * z - w * x),
    2 * (x * z - w * y),
    2 * (y * z + w * x),
    1 - 2 * (x * x + y * y),
  ];
}

function matMul(a: number[], b: number[]): number[] {
  const out = new Array<number>(9).fill(0);
  for (let i = 0; i < 3; i++)
    for (let j = 0; j < 3; j++)
      for (let k = 0; k < 3; k++) out[3 * i + j]! += a[3 * i + k]! * b[3 * k + j]!;
  return out;
}

function apply(m: number[], v: Vec3): Vec3 {
  return [
    m[0]! * v[0] + m[1]! * v[1] + m[2]! * v[2],
    m[3]! * v[0] + m[4]! * v[1] + m[5]! * v[2],
    m[6]! * v[0] + m[7]! * v[1] + m[8]! * v[2],
  ];
}

/** World joint positions for one frame (root translation zeroed). */
export function framePositions(motion: MotionDoc, frame: number): Vec3[] {
  const joints = motion.skeleton.joints;
  const f = motion.frames[frame];
  if (!f) throw new Error(`frame ${frame} out of range`);
  const world: number[][] = [];
  const pos: Vec3[] = [];
  joints.forEach((joint, j) => {
    const local = quatToMatrix(f.rot[j]!);
    if (joint.parent === null) {
      world.push(local);
      pos.push([0, 0, 0]);
    } else {
      const pw = world[joint.parent]!;
      const off = apply(pw, joint.offset);
      pos.push([
        pos[joint.parent]![0] + off[0],
        pos[joint.parent]![1] + off[1],
        pos[joint.parent]![2] + off[2],
      ]);
      world.push(matMul(pw, local));
    }
  });
  return pos;
}

export interface StickFigureOptions {
  width: number;
  height: number;
  scale: number; // pixels per meter
  color?: string;
}

/** Orthographic projections for the two preview panes (z is world up). */
export function projectFront(p: Vec3): [number, number] {
  return [p[0], -p[2]]; // looking along -y: x right, z up
}

export function projectSide(p: Vec3): [number, number] {
  return [p[1], -p[2]]; // looking along -x: y right, z up
}

export function drawStickFigure(
  ctx: CanvasRenderingContext2D,
  motion: MotionDoc,
  frame: number,
  project: (p: Vec3) => [number, number],
  opts: StickFigureOptions,
): void {
  const pos = framePositions(motion, frame);
  const cx = opts.width / 2;
  const cy = opts.height * 0.55;
  ctx.strokeStyle = opts.color ?? "#1a6";
  ctx.fillStyle = ctx.strokeStyle;
  ctx.lineWidth = 2;
  motion.skeleton.joints.forEach((joint, j) => {
    if (joint.parent === null) return;
    const [ax, ay] = project(pos[joint.parent]!);
    const [bx, by] = project(pos[j]!);
    ctx.beginPath();
    ctx.moveTo(cx + ax * opts.scale, cy + ay * opts.scale);
    ctx.lineTo(cx + bx * opts.scale, cy + by * opts.scale);
    ctx.stroke();
  });
  for (const p of pos) {
    const [x, y] = project(p);
    ctx.beginPath();
    ctx.arc(cx + x * opts.scale, cy + y * opts.scale, 3, 0, 2 * Math.PI);
    ctx.fill();
  }
}
