/**
 * Wire types for the planning service REST API.
 *
 * These mirror the JSON documents the service emits verbatim; the client
 * never recomputes any of the numbers it receives. Quaternions are
 * (x, y, z, w), the identity being [0, 0, 0, 1].
 */

export type Vec3 = [number, number, number];
export type Quat = [number, number, number, number];

export interface PoseDoc {
  xyz: number[];
  quat: number[];
}

export interface MeshDoc {
  vertices: number[][];
  faces: number[][];
}

export interface StepDoc {
  pose: PoseDoc;
  tol_pos: number[];
  tol_rot: number[];
}

export interface JointDoc {
  name: string;
  type: string;
  anchor: number[];
  axis: number[];
}

export interface RobotSkeletonDoc {
  joints: JointDoc[];
  tip: PoseDoc;
}

export interface CandidateDoc {
  index: number;
  score: number;
  per_step_status: string[];
  tcp_in_object: PoseDoc;
  tcp_world: PoseDoc;
  finger_config: Record<string, number>;
}

export interface RoiBoxDoc {
  pose: PoseDoc;
  half_extents: number[];
}

export interface SceneBundle {
  session: string;
  revision: number;
  object: {
    mesh: MeshDoc | null;
    pose: PoseDoc;
    digest: string;
  };
  steps: StepDoc[];
  robot: RobotSkeletonDoc;
  candidates: CandidateDoc[];
  selected: number | null;
  roi: RoiBoxDoc | null;
  content_hash: string;
}

export interface SessionCreated {
  id: string;
  revision: number;
  steps: number;
}

export interface PlanResponse {
  revision: number;
  count: number;
  candidates: CandidateDoc[];
  timings: Record<string, number>;
}

export interface GraspsResponse {
  revision: number;
  planned: boolean;
  count: number;
  candidates: CandidateDoc[];
}

export interface SelectResponse {
  revision: number;
  selected: number;
  ee_waypoints: PoseDoc[];
}

export interface ObjectUpdateResponse {
  revision: number;
  digest: string;
  steps: number;
}

export interface RoiApplyResponse {
  revision: number;
  points_in_box: number;
  mesh: MeshDoc;
  digest: string;
}

export interface ProgressDoc {
  phase: string;
  fraction: number;
}

export interface CloudDoc {
  points: number[][];
  frame?: string;
}
