/**
 * Thin fetch wrapper around the planning service. One method per endpoint,
 * no client-side post-processing of the payloads.
 */

import type {
  CloudDoc,
  GraspsResponse,
  ObjectUpdateResponse,
  PlanResponse,
  ProgressDoc,
  RoiApplyResponse,
  RoiBoxDoc,
  SceneBundle,
  SelectResponse,
  SessionCreated,
} from "./types";

export class ApiError extends Error {
  status: number;
  detail: string;

  constructor(status: number, detail: string) {
    super(`service error ${status}: ${detail}`);
    this.name = "ApiError";
    this.status = status;
    this.detail = detail;
  }
}

type FetchLike = typeof fetch;

export class ServiceClient {
  baseUrl: string;
  private fetchImpl: FetchLike;

  constructor(baseUrl = "", fetchImpl: FetchLike = fetch) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    let resp: Response;
    try {
      resp = await this.fetchImpl(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${String(err)}`);
    }
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const doc = await resp.json();
        if (doc && typeof doc.detail === "string") detail = doc.detail;
      } catch {
        // non-JSON error body, keep the status text
      }
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  createSession(robot: unknown, task: unknown, config?: unknown): Promise<SessionCreated> {
    const body: Record<string, unknown> = { robot, task };
    if (config !== undefined) body.config = config;
    return this.request("POST", "/sessions", body);
  }

  getScene(sid: string): Promise<SceneBundle> {
    return this.request("GET", `/sessions/${sid}/scene`);
  }

  getProgress(sid: string): Promise<ProgressDoc> {
    return this.request("GET", `/sessions/${sid}/progress`);
  }

  planGrasps(sid: string, seed = 0, jobs = 1): Promise<PlanResponse> {
    return this.request("POST", `/sessions/${sid}/grasps`, { seed, jobs });
  }

  getGrasps(sid: string): Promise<GraspsResponse> {
    return this.request("GET", `/sessions/${sid}/grasps`);
  }

  selectGrasp(sid: string, index: number, revision: number): Promise<SelectResponse> {
    return this.request("POST", `/sessions/${sid}/select`, { index, revision });
  }

  updateObject(sid: string, objectDoc: unknown): Promise<ObjectUpdateResponse> {
    return this.request("POST", `/sessions/${sid}/object`, { object: objectDoc });
  }

  applyRoi(sid: string, cloud: CloudDoc, box: RoiBoxDoc): Promise<RoiApplyResponse> {
    return this.request("POST", `/sessions/${sid}/roi`, { cloud, box });
  }

  getTask(sid: string): Promise<unknown> {
    return this.request("GET", `/sessions/${sid}/task`);
  }
}
