/**
 * Client-side view state. Everything the UI draws is derived from this
 * plus the last scene bundle fetched from the service, so replaying the
 * same bundles and edits reproduces the same view.
 */

import type { ProgressDoc, SceneBundle } from "./types";
import { defaultRoiDraft, type RoiDraft } from "./roi";

export type DisplayMode = "compact-arrows" | "single-grasp";

export interface Banner {
  id: number;
  kind: "error" | "info";
  text: string;
}

export interface ViewState {
  sessionId: string | null;
  bundle: SceneBundle | null;
  /** Index of the candidate the spin box points at. */
  cursor: number;
  mode: DisplayMode;
  roi: RoiDraft;
  /** True while a mutating request is in flight; at most one at a time. */
  pending: boolean;
  banners: Banner[];
  /** Set when the service rejected a write as stale; asks for a refresh. */
  refreshPrompt: boolean;
  progress: ProgressDoc | null;
}

export function initialState(): ViewState {
  return {
    sessionId: null,
    bundle: null,
    cursor: 0,
    mode: "compact-arrows",
    roi: defaultRoiDraft(),
    pending: false,
    banners: [],
    refreshPrompt: false,
    progress: null,
  };
}

export function candidateCount(state: ViewState): number {
  return state.bundle ? state.bundle.candidates.length : 0;
}

export function clampCursor(state: ViewState, cursor: number): number {
  const count = candidateCount(state);
  if (count === 0) return 0;
  return Math.min(Math.max(Math.floor(cursor), 0), count - 1);
}

type Listener = (state: ViewState) => void;

export class ViewStore {
  private state: ViewState;
  private listeners: Listener[] = [];
  private bannerSeq = 0;

  constructor(state: ViewState = initialState()) {
    this.state = state;
  }

  get(): ViewState {
    return this.state;
  }

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  patch(partial: Partial<ViewState>): ViewState {
    const next = { ...this.state, ...partial };
    // The cursor invariant holds no matter which field moved it: it must
    // stay inside the candidate list of whatever bundle is current.
    next.cursor = clampCursor(next, next.cursor);
    this.state = next;
    for (const fn of [...this.listeners]) fn(next);
    return next;
  }

  setBundle(bundle: SceneBundle): ViewState {
    return this.patch({ bundle, refreshPrompt: false });
  }

  setCursor(cursor: number): ViewState {
    return this.patch({ cursor });
  }

  setMode(mode: DisplayMode): ViewState {
    return this.patch({ mode });
  }

  pushBanner(kind: Banner["kind"], text: string): Banner {
    const banner = { id: ++this.bannerSeq, kind, text };
    this.patch({ banners: [...this.state.banners, banner] });
    return banner;
  }

  dismissBanner(id: number): void {
    this.patch({ banners: this.state.banners.filter((b) => b.id !== id) });
  }
}
