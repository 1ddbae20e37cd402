/** Drill-session state. The breadcrumb always mirrors the server's stack:
 * it is only ever replaced by the path a server response reports, and at
 * most one drill mutation is in flight at a time (later ones are queued). */

import { ApiError, type DrillClient } from "./api.js";
import type { DrillStep } from "./types.js";

export type StateListener = () => void;
export type NoticeListener = (message: string) => void;

export class ExplorerState {
  token = "";
  breadcrumbs: DrillStep[] = [];
  activeCount = 0;

  private queue: Promise<unknown> = Promise.resolve();
  private listeners: StateListener[] = [];
  private noticeListeners: NoticeListener[] = [];

  constructor(private client: DrillClient) {}

  onChange(listener: StateListener): void {
    this.listeners.push(listener);
  }

  onNotice(listener: NoticeListener): void {
    this.noticeListeners.push(listener);
  }

  get depth(): number {
    return this.breadcrumbs.length;
  }

  async init(): Promise<void> {
    const state = await this.client.createSession();
    this.token = state.token;
    this.apply(state.path, state.active_count);
  }

  /** Queue a drill; a 409 (empty selection) surfaces as a notice, not an error. */
  drill(level: number, clusterIds: number[]): Promise<void> {
    return this.enqueue(async () => {
      try {
        const state = await this.client.drill(this.token, level, clusterIds);
        this.apply(state.path, state.active_count);
      } catch (err) {
        if (err instanceof ApiError && err.status === 409) {
          this.notify(`empty selection: clusters ${clusterIds.join(", ")} ` +
            `share no publications with the current scope`);
          return;
        }
        throw err;
      }
    });
  }

  up(): Promise<void> {
    return this.enqueue(async () => {
      const state = await this.client.up(this.token);
      this.apply(state.path, state.active_count);
    });
  }

  private enqueue(task: () => Promise<void>): Promise<void> {
    const next = this.queue.then(task);
    this.queue = next.catch(() => undefined);
    return next;
  }

  private apply(path: DrillStep[], activeCount: number): void {
    this.breadcrumbs = path;
    this.activeCount = activeCount;
    for (const listener of this.listeners) {
      listener();
    }
  }

  private notify(message: string): void {
    for (const listener of this.noticeListeners) {
      listener(message);
    }
  }
}
