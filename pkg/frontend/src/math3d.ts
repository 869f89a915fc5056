/**
 * Minimal display-side vector math. Only what projecting the scene onto a
 * canvas needs: the robot and planner numbers all come from the service.
 */

import type { PoseDoc, Quat, Vec3 } from "./types";

export function vadd(a: Vec3, b: Vec3): Vec3 {
  return [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
}

export function vsub(a: Vec3, b: Vec3): Vec3 {
  return [a[0] - b[0], a[1] - b[1], a[2] - b[2]];
}

export function vscale(a: Vec3, s: number): Vec3 {
  return [a[0] * s, a[1] * s, a[2] * s];
}

export function vdot(a: Vec3, b: Vec3): number {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

export function vcross(a: Vec3, b: Vec3): Vec3 {
  return [
    a[1] * b[2] - a[2] * b[1],
    a[2] * b[0] - a[0] * b[2],
    a[0] * b[1] - a[1] * b[0],
  ];
}

export function vnorm(a: Vec3): number {
  return Math.sqrt(vdot(a, a));
}

export function vnormalize(a: Vec3): Vec3 {
  const n = vnorm(a);
  return n > 1e-12 ? vscale(a, 1 / n) : [0, 0, 0];
}

/** Rotate v by the quaternion q (x, y, z, w ordering, active convention). */
export function quatRotate(q: Quat, v: Vec3): Vec3 {
  const u: Vec3 = [q[0], q[1], q[2]];
  const w = q[3];
  const t = vscale(vcross(u, v), 2);
  return vadd(vadd(v, vscale(t, w)), vcross(u, t));
}

export function poseOrigin(pose: PoseDoc): Vec3 {
  return [pose.xyz[0], pose.xyz[1], pose.xyz[2]];
}

export function poseQuat(pose: PoseDoc): Quat {
  return [pose.quat[0], pose.quat[1], pose.quat[2], pose.quat[3]];
}

/** Transform a point from the pose's local frame into the world. */
export function posePoint(pose: PoseDoc, local: Vec3): Vec3 {
  return vadd(poseOrigin(pose), quatRotate(poseQuat(pose), local));
}

/** The pose's local axis (column of its rotation) as a world vector. */
export function poseAxis(pose: PoseDoc, axis: 0 | 1 | 2): Vec3 {
  const local: Vec3 = [0, 0, 0];
  local[axis] = 1;
  return quatRotate(poseQuat(pose), local);
}

export interface Camera {
  /** Orbit target in world coordinates. */
  target: Vec3;
  /** Yaw about world z, radians. */
  yaw: number;
  /** Pitch above the horizon, radians. */
  pitch: number;
  /** Distance from the target. */
  distance: number;
}

export function defaultCamera(): Camera {
  return { target: [0.4, 0.0, 0.3], yaw: -0.7, pitch: 0.45, distance: 1.6 };
}

/**
 * Project a world point through the orbit camera. Returns canvas-space
 * x/y (origin centre, y up flipped by the renderer) plus the view depth
 * used for painter's-algorithm ordering.
 */
export function project(
  cam: Camera,
  p: Vec3,
  width: number,
  height: number,
): { x: number; y: number; depth: number } {
  const cy = Math.cos(cam.yaw);
  const sy = Math.sin(cam.yaw);
  const cp = Math.cos(cam.pitch);
  const sp = Math.sin(cam.pitch);
  const eyeDir: Vec3 = [cy * cp, sy * cp, sp];
  const eye = vadd(cam.target, vscale(eyeDir, cam.distance));
  const fwd = vnormalize(vsub(cam.target, eye));
  const right = vnormalize(vcross(fwd, [0, 0, 1]));
  const up = vcross(right, fwd);
  const rel = vsub(p, eye);
  const depth = vdot(rel, fwd);
  const f = (0.9 * Math.min(width, height)) / Math.max(depth, 0.05);
  return {
    x: width / 2 + vdot(rel, right) * f,
    y: height / 2 - vdot(rel, up) * f,
    depth,
  };
}
