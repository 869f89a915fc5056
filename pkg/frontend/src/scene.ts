/**
 * Scene description builder. Turns the view state into a flat list of
 * world-space drawables; the canvas renderer projects and strokes them.
 * Keeping this stage pure means the view is a function of (bundle, local
 * edits) and can be unit tested without a canvas.
 */

import type { CandidateDoc, MeshDoc, PoseDoc, SceneBundle, Vec3 } from "./types";
import { poseAxis, posePoint, poseOrigin, vadd, vscale } from "./math3d";
import { boxEdges, handlePosition, HANDLE_IDS, type HandleId } from "./roi";
import type { ViewState } from "./state";

export const TOLERANCE_ONLY = "tolerance_only";

const STEP_AXIS_LEN = 0.04;
const ARROW_LEN = 0.05;
const PLACEHOLDER_HALF: Vec3 = [0.05, 0.05, 0.05];

export type Segment = [Vec3, Vec3];

export interface ObjectMeshItem {
  kind: "object-mesh";
  edges: Segment[];
}

export interface ObjectPlaceholderItem {
  kind: "object-placeholder";
  edges: Segment[];
}

export interface StepFrameItem {
  kind: "step-frame";
  step: number;
  origin: Vec3;
  /** World tips of the x, y, z axis strokes. */
  axes: [Vec3, Vec3, Vec3];
  /** True when the cursor candidate only reaches this step via tolerances. */
  tinted: boolean;
}

export interface StepTolBoxItem {
  kind: "step-tolbox";
  step: number;
  edges: Segment[];
  tinted: boolean;
}

export interface GraspArrowItem {
  kind: "grasp-arrow";
  index: number;
  origin: Vec3;
  tip: Vec3;
  tinted: boolean;
  selected: boolean;
}

export interface HandMarkerItem {
  kind: "hand-marker";
  index: number;
  origin: Vec3;
  /** Finger, palm and approach strokes in world space. */
  strokes: Segment[];
  tinted: boolean;
  selected: boolean;
}

export interface SelectedMarkItem {
  kind: "selected-mark";
  index: number;
  position: Vec3;
}

export interface RoiBoxItem {
  kind: "roi-box";
  edges: Segment[];
}

export interface RoiHandleItem {
  kind: "roi-handle";
  handle: HandleId;
  position: Vec3;
}

export interface RobotSkeletonItem {
  kind: "robot-skeleton";
  points: Vec3[];
}

export type DisplayItem =
  | ObjectMeshItem
  | ObjectPlaceholderItem
  | StepFrameItem
  | StepTolBoxItem
  | GraspArrowItem
  | HandMarkerItem
  | SelectedMarkItem
  | RoiBoxItem
  | RoiHandleItem
  | RobotSkeletonItem;

function meshEdges(mesh: MeshDoc, pose: PoseDoc): Segment[] {
  const world = mesh.vertices.map((v) => posePoint(pose, [v[0], v[1], v[2]]));
  const seen = new Set<string>();
  const edges: Segment[] = [];
  for (const face of mesh.faces) {
    for (let k = 0; k < face.length; k++) {
      const a = face[k];
      const b = face[(k + 1) % face.length];
      const key = a < b ? `${a}:${b}` : `${b}:${a}`;
      if (seen.has(key)) continue;
      seen.add(key);
      edges.push([world[a], world[b]]);
    }
  }
  return edges;
}

function orientedBoxEdges(pose: PoseDoc, half: Vec3): Segment[] {
  const local = boxEdges({ center: [0, 0, 0], halfExtents: half });
  return local.map(([a, b]) => [posePoint(pose, a), posePoint(pose, b)]);
}

function candidateTinted(cand: CandidateDoc): boolean {
  return cand.per_step_status.includes(TOLERANCE_ONLY);
}

function handStrokes(pose: PoseDoc, gap: number): Segment[] {
  // A schematic parallel jaw: palm bar along x, two fingers closing
  // along z, and an approach stub behind the palm.
  const half = Math.max(gap / 2, 0.01);
  const depth = 0.035;
  const at = (x: number, z: number): Vec3 => posePoint(pose, [x, 0, z]);
  return [
    [at(-half, -depth), at(half, -depth)],
    [at(-half, -depth), at(-half, 0)],
    [at(half, -depth), at(half, 0)],
    [at(0, -depth), at(0, -depth - 0.03)],
  ];
}

function fingerGap(cand: CandidateDoc): number {
  let gap = 0;
  for (const v of Object.values(cand.finger_config)) gap += Math.abs(v);
  return gap;
}

/** Build the drawable list for the current view state. */
export function buildDisplayList(state: ViewState): DisplayItem[] {
  const bundle = state.bundle;
  if (!bundle) return [];
  const items: DisplayItem[] = [];

  const mesh = bundle.object.mesh;
  if (mesh && mesh.vertices.length > 0 && mesh.faces.length > 0) {
    items.push({ kind: "object-mesh", edges: meshEdges(mesh, bundle.object.pose) });
  } else {
    items.push({
      kind: "object-placeholder",
      edges: orientedBoxEdges(bundle.object.pose, PLACEHOLDER_HALF),
    });
  }

  const cursorCand: CandidateDoc | null =
    state.mode === "single-grasp" && bundle.candidates.length > 0
      ? bundle.candidates[state.cursor]
      : null;

  bundle.steps.forEach((step, i) => {
    const tinted = cursorCand !== null && cursorCand.per_step_status[i] === TOLERANCE_ONLY;
    const origin = poseOrigin(step.pose);
    items.push({
      kind: "step-frame",
      step: i,
      origin,
      axes: [
        vadd(origin, vscale(poseAxis(step.pose, 0), STEP_AXIS_LEN)),
        vadd(origin, vscale(poseAxis(step.pose, 1), STEP_AXIS_LEN)),
        vadd(origin, vscale(poseAxis(step.pose, 2), STEP_AXIS_LEN)),
      ],
      tinted,
    });
    if (step.tol_pos.some((t) => t > 0)) {
      items.push({
        kind: "step-tolbox",
        step: i,
        edges: orientedBoxEdges(step.pose, [
          Math.max(step.tol_pos[0], 1e-4),
          Math.max(step.tol_pos[1], 1e-4),
          Math.max(step.tol_pos[2], 1e-4),
        ]),
        tinted,
      });
    }
  });

  if (state.mode === "compact-arrows") {
    for (const cand of bundle.candidates) {
      const origin = poseOrigin(cand.tcp_world);
      // Arrow points along the approach (negative z is into the object).
      const tip = vadd(origin, vscale(poseAxis(cand.tcp_world, 2), -ARROW_LEN));
      items.push({
        kind: "grasp-arrow",
        index: cand.index,
        origin,
        tip,
        tinted: candidateTinted(cand),
        selected: bundle.selected === cand.index,
      });
    }
  } else if (cursorCand) {
    items.push({
      kind: "hand-marker",
      index: cursorCand.index,
      origin: poseOrigin(cursorCand.tcp_world),
      strokes: handStrokes(cursorCand.tcp_world, fingerGap(cursorCand)),
      tinted: candidateTinted(cursorCand),
      selected: bundle.selected === cursorCand.index,
    });
  }

  if (bundle.selected !== null && state.mode === "single-grasp") {
    const sel = bundle.candidates[bundle.selected];
    if (sel) {
      items.push({
        kind: "selected-mark",
        index: sel.index,
        position: poseOrigin(sel.tcp_world),
      });
    }
  }

  if (state.roi.active) {
    items.push({ kind: "roi-box", edges: boxEdges(state.roi.box) });
    for (const handle of HANDLE_IDS) {
      items.push({
        kind: "roi-handle",
        handle,
        position: handlePosition(state.roi.box, handle),
      });
    }
  }

  const anchors = bundle.robot.joints.map(
    (j) => [j.anchor[0], j.anchor[1], j.anchor[2]] as Vec3,
  );
  if (anchors.length > 0) {
    items.push({
      kind: "robot-skeleton",
      points: [...anchors, poseOrigin(bundle.robot.tip)],
    });
  }

  return items;
}
