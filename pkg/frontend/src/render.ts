/**
 * Canvas renderer. Projects the display list through the orbit camera and
 * strokes it back-to-front. Deliberately plain 2D wireframe drawing; the
 * scene content itself is decided in scene.ts.
 */

import { project, type Camera } from "./math3d";
import type { DisplayItem, Segment } from "./scene";
import type { Vec3 } from "./types";

const COLORS = {
  mesh: "#8a8a96",
  placeholder: "#b0606a",
  axes: ["#d04040", "#3faf4a", "#4060d0"],
  tolbox: "#8878c8",
  grasp: "#2e9e4f",
  tinted: "#18a0b8",
  selected: "#e08a1e",
  roi: "#caa82e",
  handle: "#e0c040",
  skeleton: "#707078",
};

interface Stroke {
  depth: number;
  width: number;
  color: string;
  pts: { x: number; y: number }[];
  fill?: boolean;
}

function pushSegments(
  out: Stroke[],
  cam: Camera,
  segs: Segment[],
  color: string,
  width: number,
  w: number,
  h: number,
) {
  for (const [a, b] of segs) {
    const pa = project(cam, a, w, h);
    const pb = project(cam, b, w, h);
    out.push({
      depth: (pa.depth + pb.depth) / 2,
      width,
      color,
      pts: [pa, pb],
    });
  }
}

function pushDot(
  out: Stroke[],
  cam: Camera,
  p: Vec3,
  color: string,
  size: number,
  w: number,
  h: number,
) {
  const pp = project(cam, p, w, h);
  out.push({
    depth: pp.depth,
    width: 1,
    color,
    fill: true,
    pts: [
      { x: pp.x - size, y: pp.y - size },
      { x: pp.x + size, y: pp.y - size },
      { x: pp.x + size, y: pp.y + size },
      { x: pp.x - size, y: pp.y + size },
    ],
  });
}

function arrowStrokes(
  out: Stroke[],
  cam: Camera,
  origin: Vec3,
  tip: Vec3,
  color: string,
  w: number,
  h: number,
) {
  const po = project(cam, origin, w, h);
  const pt = project(cam, tip, w, h);
  out.push({ depth: (po.depth + pt.depth) / 2, width: 2, color, pts: [po, pt] });
  // A small screen-space head at the tip.
  const dx = pt.x - po.x;
  const dy = pt.y - po.y;
  const len = Math.hypot(dx, dy) || 1;
  const ux = dx / len;
  const uy = dy / len;
  const head = 6;
  out.push({
    depth: pt.depth,
    width: 2,
    color,
    pts: [
      { x: pt.x - head * (ux + 0.5 * uy), y: pt.y - head * (uy - 0.5 * ux) },
      { x: pt.x, y: pt.y },
      { x: pt.x - head * (ux - 0.5 * uy), y: pt.y - head * (uy + 0.5 * ux) },
    ],
  });
}

export function drawDisplayList(
  ctx: CanvasRenderingContext2D,
  items: DisplayItem[],
  cam: Camera,
  width: number,
  height: number,
): void {
  ctx.clearRect(0, 0, width, height);
  const strokes: Stroke[] = [];

  for (const item of items) {
    switch (item.kind) {
      case "object-mesh":
        pushSegments(strokes, cam, item.edges, COLORS.mesh, 1, width, height);
        break;
      case "object-placeholder":
        pushSegments(strokes, cam, item.edges, COLORS.placeholder, 1, width, height);
        break;
      case "step-frame": {
        for (let a = 0; a < 3; a++) {
          pushSegments(
            strokes, cam, [[item.origin, item.axes[a]]],
            item.tinted ? COLORS.tinted : COLORS.axes[a], 2, width, height,
          );
        }
        break;
      }
      case "step-tolbox":
        pushSegments(
          strokes, cam, item.edges,
          item.tinted ? COLORS.tinted : COLORS.tolbox, 1, width, height,
        );
        break;
      case "grasp-arrow": {
        const color = item.selected
          ? COLORS.selected
          : item.tinted
            ? COLORS.tinted
            : COLORS.grasp;
        arrowStrokes(strokes, cam, item.origin, item.tip, color, width, height);
        break;
      }
      case "hand-marker": {
        const color = item.selected
          ? COLORS.selected
          : item.tinted
            ? COLORS.tinted
            : COLORS.grasp;
        pushSegments(strokes, cam, item.strokes, color, 3, width, height);
        break;
      }
      case "selected-mark":
        pushDot(strokes, cam, item.position, COLORS.selected, 4, width, height);
        break;
      case "roi-box":
        pushSegments(strokes, cam, item.edges, COLORS.roi, 2, width, height);
        break;
      case "roi-handle":
        pushDot(strokes, cam, item.position, COLORS.handle, 5, width, height);
        break;
      case "robot-skeleton": {
        for (let i = 0; i + 1 < item.points.length; i++) {
          pushSegments(
            strokes, cam, [[item.points[i], item.points[i + 1]]],
            COLORS.skeleton, 4, width, height,
          );
        }
        for (const p of item.points) pushDot(strokes, cam, p, COLORS.skeleton, 3, width, height);
        break;
      }
    }
  }

  strokes.sort((a, b) => b.depth - a.depth);
  for (const s of strokes) {
    ctx.beginPath();
    ctx.moveTo(s.pts[0].x, s.pts[0].y);
    for (let i = 1; i < s.pts.length; i++) ctx.lineTo(s.pts[i].x, s.pts[i].y);
    if (s.fill) {
      ctx.closePath();
      ctx.fillStyle = s.color;
      ctx.fill();
    } else {
      ctx.strokeStyle = s.color;
      ctx.lineWidth = s.width;
      ctx.stroke();
    }
  }
}

/** Hit test the ROI handles in screen space; nearest within reach wins. */
export function pickRoiHandle(
  items: DisplayItem[],
  cam: Camera,
  x: number,
  y: number,
  width: number,
  height: number,
  reach = 12,
): { handle: string; depth: number } | null {
  let best: { handle: string; depth: number } | null = null;
  let bestDist = reach;
  for (const item of items) {
    if (item.kind !== "roi-handle") continue;
    const p = project(cam, item.position, width, height);
    const d = Math.hypot(p.x - x, p.y - y);
    if (d <= bestDist) {
      bestDist = d;
      best = { handle: item.handle, depth: p.depth };
    }
  }
  return best;
}
