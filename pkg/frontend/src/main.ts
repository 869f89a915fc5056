/**
 * DOM wiring. All state lives in the ViewStore; this file only moves
 * values between widgets, the controller, and the canvas.
 */

import { ServiceClient } from "./api";
import { Controller } from "./actions";
import { ViewStore, candidateCount } from "./state";
import { buildDisplayList } from "./scene";
import { drawDisplayList, pickRoiHandle } from "./render";
import { defaultCamera, project, type Camera } from "./math3d";
import {
  dragHandle,
  formatField,
  handleAxis,
  handlePosition,
  handleSign,
  parseField,
  setCenterField,
  setHalfExtentField,
  type Axis,
  type HandleId,
} from "./roi";
import type { CloudDoc, Vec3 } from "./types";

const store = new ViewStore();
const client = new ServiceClient("");
const controller = new Controller(client, store);

const el = <T extends HTMLElement>(id: string): T => {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
};

const canvas = el<HTMLCanvasElement>("canvas");
const ctx = canvas.getContext("2d")!;
const camera: Camera = defaultCamera();

async function readJsonFile(input: HTMLInputElement): Promise<unknown | null> {
  const file = input.files && input.files[0];
  if (!file) return null;
  return JSON.parse(await file.text());
}

function resizeCanvas() {
  const rect = canvas.getBoundingClientRect();
  canvas.width = Math.max(1, Math.floor(rect.width * devicePixelRatio));
  canvas.height = Math.max(1, Math.floor(rect.height * devicePixelRatio));
  ctx.setTransform(devicePixelRatio, 0, 0, devicePixelRatio, 0, 0);
  render();
}

function render() {
  const state = store.get();
  const rect = canvas.getBoundingClientRect();
  const w = rect.width;
  const h = rect.height;
  drawDisplayList(ctx, buildDisplayList(state), camera, w, h);

  const count = candidateCount(state);
  el<HTMLSpanElement>("count").textContent = `${count} candidates`;
  const cursorBox = el<HTMLInputElement>("cursor");
  cursorBox.max = String(Math.max(count - 1, 0));
  if (document.activeElement !== cursorBox) cursorBox.value = String(state.cursor);

  el<HTMLButtonElement>("get-grasps").disabled = state.pending;
  el<HTMLButtonElement>("set-wp").disabled = state.pending;
  el<HTMLButtonElement>("update-object").disabled = state.pending;
  el<HTMLButtonElement>("create-mesh").disabled = state.pending;
  el<HTMLButtonElement>("open-session").disabled = state.pending;

  el<HTMLDivElement>("progress").textContent = state.progress
    ? `${state.progress.phase} ${(state.progress.fraction * 100).toFixed(0)}%`
    : "";

  const sel = state.bundle?.selected;
  el<HTMLSpanElement>("selected").textContent =
    sel === null || sel === undefined ? "" : `selected: ${sel}`;

  el<HTMLDivElement>("refresh-prompt").style.display = state.refreshPrompt ? "block" : "none";

  const banners = el<HTMLDivElement>("banners");
  for (const node of Array.from(banners.querySelectorAll(".banner"))) node.remove();
  for (const b of state.banners) {
    const div = document.createElement("div");
    div.className = `banner ${b.kind}`;
    const span = document.createElement("span");
    span.textContent = b.text;
    const dismiss = document.createElement("button");
    dismiss.textContent = "x";
    dismiss.addEventListener("click", () => store.dismissBanner(b.id));
    div.append(span, dismiss);
    banners.append(div);
  }

  syncRoiPanel();

  const hud = state.bundle
    ? `session ${state.bundle.session}  rev ${state.bundle.revision}\n` +
      `cursor ${state.cursor}  mode ${state.mode}`
    : "no session";
  el<HTMLDivElement>("hud").textContent = hud;
}

const ROI_FIELDS: [string, "c" | "h", Axis][] = [
  ["roi-cx", "c", 0], ["roi-cy", "c", 1], ["roi-cz", "c", 2],
  ["roi-hx", "h", 0], ["roi-hy", "h", 1], ["roi-hz", "h", 2],
];

function syncRoiPanel() {
  const { box, active } = store.get().roi;
  el<HTMLInputElement>("roi-active").checked = active;
  for (const [id, kind, axis] of ROI_FIELDS) {
    const input = el<HTMLInputElement>(id);
    if (document.activeElement === input) continue;
    input.value = formatField(kind === "c" ? box.center[axis] : box.halfExtents[axis]);
  }
}

store.subscribe(render);

el<HTMLButtonElement>("open-session").addEventListener("click", async () => {
  const robot = await readJsonFile(el<HTMLInputElement>("robot-file"));
  const task = await readJsonFile(el<HTMLInputElement>("task-file"));
  if (!robot || !task) {
    store.pushBanner("info", "pick robot and task files first");
    return;
  }
  const config = await readJsonFile(el<HTMLInputElement>("config-file"));
  await controller.openSession(robot, task, config ?? undefined);
  const sid = store.get().sessionId;
  if (sid) el<HTMLInputElement>("session-id").value = sid;
});

el<HTMLButtonElement>("join-session").addEventListener("click", () => {
  const sid = el<HTMLInputElement>("session-id").value.trim();
  if (sid) void controller.joinSession(sid);
});

el<HTMLButtonElement>("get-grasps").addEventListener("click", () => {
  const seed = Number(el<HTMLInputElement>("seed").value) || 0;
  void controller.getGrasps(seed);
});

el<HTMLInputElement>("cursor").addEventListener("change", (ev) => {
  controller.scroll(Number((ev.target as HTMLInputElement).value) || 0);
});

el<HTMLInputElement>("mode-compact").addEventListener("change", () => store.setMode("compact-arrows"));
el<HTMLInputElement>("mode-single").addEventListener("change", () => store.setMode("single-grasp"));

el<HTMLButtonElement>("set-wp").addEventListener("click", () => void controller.setWp());

el<HTMLButtonElement>("do-refresh").addEventListener("click", () => {
  void controller.refreshScene();
});

el<HTMLButtonElement>("update-object").addEventListener("click", async () => {
  const doc = await readJsonFile(el<HTMLInputElement>("object-file"));
  if (!doc) {
    store.pushBanner("info", "pick an object mesh file first");
    return;
  }
  await controller.updateObject(doc);
});

el<HTMLInputElement>("roi-active").addEventListener("change", (ev) => {
  const roi = store.get().roi;
  store.patch({ roi: { ...roi, active: (ev.target as HTMLInputElement).checked } });
});

for (const [id, kind, axis] of ROI_FIELDS) {
  el<HTMLInputElement>(id).addEventListener("change", (ev) => {
    const value = parseField((ev.target as HTMLInputElement).value);
    if (value === null) return;
    const roi = store.get().roi;
    const box = kind === "c"
      ? setCenterField(roi.box, axis, value)
      : setHalfExtentField(roi.box, axis, value);
    store.patch({ roi: { ...roi, box } });
  });
}

el<HTMLButtonElement>("create-mesh").addEventListener("click", async () => {
  const doc = (await readJsonFile(el<HTMLInputElement>("cloud-file"))) as CloudDoc | null;
  if (!doc || !Array.isArray(doc.points)) {
    store.pushBanner("info", "pick a point cloud file first");
    return;
  }
  await controller.createMesh(doc);
});

// Canvas interaction: orbit with the left button, wheel to zoom, and
// grab a ROI handle to resize the box when edit mode is on.
let orbiting = false;
let draggingHandle: HandleId | null = null;
let lastX = 0;
let lastY = 0;

canvas.addEventListener("mousedown", (ev) => {
  const rect = canvas.getBoundingClientRect();
  const x = ev.clientX - rect.left;
  const y = ev.clientY - rect.top;
  lastX = x;
  lastY = y;
  const state = store.get();
  if (state.roi.active) {
    const hit = pickRoiHandle(
      buildDisplayList(state), camera, x, y, rect.width, rect.height,
    );
    if (hit) {
      draggingHandle = hit.handle as HandleId;
      return;
    }
  }
  orbiting = true;
});

canvas.addEventListener("mousemove", (ev) => {
  const rect = canvas.getBoundingClientRect();
  const x = ev.clientX - rect.left;
  const y = ev.clientY - rect.top;
  const dx = x - lastX;
  const dy = y - lastY;
  lastX = x;
  lastY = y;
  if (draggingHandle) {
    const roi = store.get().roi;
    const axis = handleAxis(draggingHandle);
    const sign = handleSign(draggingHandle);
    // Screen direction of the handle's outward axis at the handle, used
    // to turn the mouse delta into a world delta along that axis.
    const pos = handlePosition(roi.box, draggingHandle);
    const outward: Vec3 = [0, 0, 0];
    outward[axis] = sign * 0.01;
    const p0 = project(camera, pos, rect.width, rect.height);
    const p1 = project(
      camera,
      [pos[0] + outward[0], pos[1] + outward[1], pos[2] + outward[2]],
      rect.width, rect.height,
    );
    const sx = p1.x - p0.x;
    const sy = p1.y - p0.y;
    const len2 = sx * sx + sy * sy;
    if (len2 > 1e-9) {
      const worldDelta = ((dx * sx + dy * sy) / len2) * 0.01;
      store.patch({ roi: { ...roi, box: dragHandle(roi.box, draggingHandle, worldDelta) } });
    }
    return;
  }
  if (orbiting) {
    camera.yaw -= dx * 0.008;
    camera.pitch = Math.min(1.5, Math.max(-1.5, camera.pitch + dy * 0.008));
    render();
  }
});

window.addEventListener("mouseup", () => {
  orbiting = false;
  draggingHandle = null;
});

canvas.addEventListener("wheel", (ev) => {
  ev.preventDefault();
  camera.distance = Math.min(8, Math.max(0.2, camera.distance * (1 + ev.deltaY * 0.001)));
  render();
});

window.addEventListener("resize", resizeCanvas);
resizeCanvas();
