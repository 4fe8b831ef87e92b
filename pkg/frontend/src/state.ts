/**
 * Per-tab view state. Rejections are staged locally and only applied on an
 * explicit action; any upstream stage mutation flags the downstream views
 * stale until they refetch.
 */

import type { RunMetrics, SessionSummary } from "./api.js";

export type Stage = "raw" | "filtered" | "clean";

export const VIEW_NAMES = ["channels", "ica", "bands", "classify"] as const;
export type ViewName = (typeof VIEW_NAMES)[number];

/** Which views depend on a mutated server stage. */
const DOWNSTREAM: Record<string, ViewName[]> = {
  dataset: ["channels", "ica", "bands", "classify"],
  filter: ["channels", "ica", "bands", "classify"],
  ica: ["channels", "bands", "classify"],
  features: ["classify"],
};

export class ViewState {
  sessionId: string | null = null;
  summary: SessionSummary | null = null;
  trial = 0;
  channel: string | null = null;
  stage: Stage = "raw";
  pendingRejections = new Set<number>();
  appliedRejections: number[] = [];
  lastRun: RunMetrics | null = null;
  stale = new Set<ViewName>();
  private listeners = new Set<() => void>();

  channels(): string[] {
    return this.summary?.dataset?.channels ?? [];
  }

  trialCount(): number {
    return this.summary?.dataset?.trials ?? 0;
  }

  onChange(listener: () => void): void {
    this.listeners.add(listener);
  }

  notify(): void {
    for (const listener of this.listeners) listener();
  }

  /** Mark every view downstream of a mutated stage as stale. */
  markStaleFrom(stage: keyof typeof DOWNSTREAM): void {
    for (const view of DOWNSTREAM[stage] ?? []) {
      this.stale.add(view);
    }
    this.notify();
  }

  refreshed(view: ViewName): void {
    this.stale.delete(view);
  }

  isStale(view: ViewName): boolean {
    return this.stale.has(view);
  }
}
