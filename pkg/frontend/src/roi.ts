/**
 * ROI box edit state. The numeric side panel and the 3D drag handles both
 * write through the functions here, so they can never disagree about the
 * box: the panel shows formatField() of the same state the handles move.
 */

import type { RoiBoxDoc, Vec3 } from "./types";

/** Decimal places the numeric fields display (millimetre resolution). */
export const DISPLAY_DECIMALS = 3;

export interface RoiBoxState {
  center: Vec3;
  halfExtents: Vec3;
}

export interface RoiDraft {
  active: boolean;
  box: RoiBoxState;
}

export type Axis = 0 | 1 | 2;

/** One drag handle per box face, named by the outward face normal. */
export type HandleId = "+x" | "-x" | "+y" | "-y" | "+z" | "-z";

export const HANDLE_IDS: HandleId[] = ["+x", "-x", "+y", "-y", "+z", "-z"];

const MIN_HALF_EXTENT = 0.001;

export function defaultRoiDraft(): RoiDraft {
  return {
    active: false,
    box: { center: [0.5, 0.0, 0.3], halfExtents: [0.1, 0.1, 0.1] },
  };
}

export function handleAxis(handle: HandleId): Axis {
  return { x: 0, y: 1, z: 2 }[handle[1] as "x" | "y" | "z"] as Axis;
}

export function handleSign(handle: HandleId): 1 | -1 {
  return handle[0] === "+" ? 1 : -1;
}

/** World position of a face handle: box centre offset by one half extent. */
export function handlePosition(box: RoiBoxState, handle: HandleId): Vec3 {
  const axis = handleAxis(handle);
  const pos: Vec3 = [...box.center];
  pos[axis] += handleSign(handle) * box.halfExtents[axis];
  return pos;
}

/**
 * Drag one face handle outward (positive delta) or inward along its face
 * normal. Only that face moves, so both the half extent and the centre
 * shift by half the delta. The opposite face stays put.
 */
export function dragHandle(box: RoiBoxState, handle: HandleId, delta: number): RoiBoxState {
  const axis = handleAxis(handle);
  const sign = handleSign(handle);
  let half = box.halfExtents[axis] + delta / 2;
  let clamped = delta;
  if (half < MIN_HALF_EXTENT) {
    clamped = (MIN_HALF_EXTENT - box.halfExtents[axis]) * 2;
    half = MIN_HALF_EXTENT;
  }
  const center: Vec3 = [...box.center];
  center[axis] += (sign * clamped) / 2;
  const halfExtents: Vec3 = [...box.halfExtents];
  halfExtents[axis] = half;
  return { center, halfExtents };
}

/** Numeric-panel write path: set one centre coordinate. */
export function setCenterField(box: RoiBoxState, axis: Axis, value: number): RoiBoxState {
  const center: Vec3 = [...box.center];
  center[axis] = value;
  return { center, halfExtents: [...box.halfExtents] };
}

/** Numeric-panel write path: set one half extent (kept positive). */
export function setHalfExtentField(box: RoiBoxState, axis: Axis, value: number): RoiBoxState {
  const halfExtents: Vec3 = [...box.halfExtents];
  halfExtents[axis] = Math.max(Math.abs(value), MIN_HALF_EXTENT);
  return { center: [...box.center], halfExtents };
}

/** How the numeric panel renders a coordinate. */
export function formatField(value: number): string {
  return value.toFixed(DISPLAY_DECIMALS);
}

export function parseField(text: string): number | null {
  const v = Number(text);
  return Number.isFinite(v) ? v : null;
}

/** Serialize for the service; the edited box is world-axis-aligned. */
export function roiBoxDoc(box: RoiBoxState): RoiBoxDoc {
  return {
    pose: { xyz: [...box.center], quat: [0, 0, 0, 1] },
    half_extents: [...box.halfExtents],
  };
}

export function roiBoxFromDoc(doc: RoiBoxDoc): RoiBoxState {
  return {
    center: [doc.pose.xyz[0], doc.pose.xyz[1], doc.pose.xyz[2]],
    halfExtents: [doc.half_extents[0], doc.half_extents[1], doc.half_extents[2]],
  };
}

/** The 12 box edges as world segment endpoints, for the wireframe. */
export function boxEdges(box: RoiBoxState): [Vec3, Vec3][] {
  const [cx, cy, cz] = box.center;
  const [hx, hy, hz] = box.halfExtents;
  const corner = (sx: number, sy: number, sz: number): Vec3 => [
    cx + sx * hx,
    cy + sy * hy,
    cz + sz * hz,
  ];
  const edges: [Vec3, Vec3][] = [];
  for (const s of [-1, 1]) {
    for (const t of [-1, 1]) {
      edges.push([corner(-1, s, t), corner(1, s, t)]);
      edges.push([corner(s, -1, t), corner(s, 1, t)]);
      edges.push([corner(s, t, -1), corner(s, t, 1)]);
    }
  }
  return edges;
}
