/**
 * UI actions. Each mutating action takes the single in-flight slot; a
 * second click while one is pending is suppressed rather than queued, so
 * the service never sees interleaved writes from one client. Stale-write
 * rejections surface as a refresh prompt instead of a retry.
 */

import { ApiError, type ServiceClient } from "./api";
import { roiBoxDoc } from "./roi";
import type { ViewStore } from "./state";
import type { CloudDoc } from "./types";

export type ActionResult = "done" | "suppressed" | "error" | "stale" | "empty";

const PROGRESS_POLL_MS = 150;

export class Controller {
  client: ServiceClient;
  store: ViewStore;
  progressPollMs: number;

  constructor(client: ServiceClient, store: ViewStore, progressPollMs = PROGRESS_POLL_MS) {
    this.client = client;
    this.store = store;
    this.progressPollMs = progressPollMs;
  }

  private sessionId(): string {
    const sid = this.store.get().sessionId;
    if (!sid) throw new Error("no session open");
    return sid;
  }

  /** Take the mutating slot, or report the action as suppressed. */
  private acquire(): boolean {
    if (this.store.get().pending) return false;
    this.store.patch({ pending: true });
    return true;
  }

  private release(): void {
    this.store.patch({ pending: false, progress: null });
  }

  async openSession(robot: unknown, task: unknown, config?: unknown): Promise<ActionResult> {
    if (!this.acquire()) return "suppressed";
    try {
      const created = await this.client.createSession(robot, task, config);
      this.store.patch({ sessionId: created.id, cursor: 0 });
      await this.refreshScene();
      return "done";
    } catch (err) {
      this.bannerFor(err);
      return "error";
    } finally {
      this.release();
    }
  }

  async joinSession(sid: string): Promise<ActionResult> {
    if (!this.acquire()) return "suppressed";
    try {
      const bundle = await this.client.getScene(sid);
      this.store.patch({ sessionId: sid, cursor: 0 });
      this.store.setBundle(bundle);
      return "done";
    } catch (err) {
      this.bannerFor(err);
      return "error";
    } finally {
      this.release();
    }
  }

  /** Reads may overlap writes, so no slot is taken here. */
  async refreshScene(): Promise<void> {
    const bundle = await this.client.getScene(this.sessionId());
    this.store.setBundle(bundle);
  }

  async getGrasps(seed = 0, jobs = 1): Promise<ActionResult> {
    if (!this.acquire()) return "suppressed";
    const sid = this.sessionId();
    const poll = this.startProgressPoll(sid);
    try {
      const plan = await this.client.planGrasps(sid, seed, jobs);
      await this.refreshScene();
      this.store.setCursor(0);
      if (plan.count === 0) {
        this.store.pushBanner("info", "0 candidates");
        return "empty";
      }
      return "done";
    } catch (err) {
      this.bannerFor(err);
      return "error";
    } finally {
      clearInterval(poll);
      this.release();
    }
  }

  scroll(index: number): void {
    this.store.setCursor(index);
  }

  async setWp(): Promise<ActionResult> {
    const state = this.store.get();
    if (!state.bundle || state.bundle.candidates.length === 0) {
      this.store.pushBanner("info", "no candidates to select");
      return "error";
    }
    if (!this.acquire()) return "suppressed";
    try {
      await this.client.selectGrasp(
        this.sessionId(), state.cursor, state.bundle.revision,
      );
      await this.refreshScene();
      return "done";
    } catch (err) {
      if (err instanceof ApiError && err.status === 409 && err.detail.includes("stale revision")) {
        // Someone changed the scene under us. Never overwrite silently:
        // surface a refresh prompt and leave the selection alone.
        this.store.patch({ refreshPrompt: true });
        this.store.pushBanner("error", `${err.detail}; refresh the scene and retry`);
        return "stale";
      }
      this.bannerFor(err);
      return "error";
    } finally {
      this.release();
    }
  }

  async updateObject(objectDoc: unknown): Promise<ActionResult> {
    if (!this.acquire()) return "suppressed";
    try {
      await this.client.updateObject(this.sessionId(), objectDoc);
      await this.refreshScene();
      this.store.setCursor(0);
      return "done";
    } catch (err) {
      this.bannerFor(err);
      return "error";
    } finally {
      this.release();
    }
  }

  async createMesh(cloud: CloudDoc): Promise<ActionResult> {
    if (!this.acquire()) return "suppressed";
    try {
      const box = roiBoxDoc(this.store.get().roi.box);
      await this.client.applyRoi(this.sessionId(), cloud, box);
      await this.refreshScene();
      this.store.setCursor(0);
      return "done";
    } catch (err) {
      // Reconstruction failures carry the in-box point count in the
      // detail string; show it as-is.
      this.bannerFor(err);
      return "error";
    } finally {
      this.release();
    }
  }

  private startProgressPoll(sid: string): ReturnType<typeof setInterval> {
    return setInterval(() => {
      this.client
        .getProgress(sid)
        .then((p) => {
          if (this.store.get().pending) this.store.patch({ progress: p });
        })
        .catch(() => {
          // Progress is advisory; a failed poll never interrupts the plan.
        });
    }, this.progressPollMs);
  }

  private bannerFor(err: unknown): void {
    if (err instanceof ApiError) {
      this.store.pushBanner("error", err.detail);
    } else {
      this.store.pushBanner("error", String(err));
    }
  }
}
