/** Incremental event polling with a seq cursor, so each event is seen once. */

import { fetchEvents } from "./api.js";
import type { RunEvent } from "./types.js";

export interface PollerCallbacks {
  onEvents: (events: RunEvent[]) => void;
  onError?: (error: unknown) => void;
}

export class EventPoller {
  private cursor: number;
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly runId: string,
    private readonly callbacks: PollerCallbacks,
    since = 0,
  ) {
    this.cursor = since;
  }

  /** Fetch events newer than the cursor; deliver and advance on success. */
  async tick(): Promise<RunEvent[]> {
    let events: RunEvent[];
    try {
      events = await fetchEvents(this.runId, this.cursor);
    } catch (error) {
      this.callbacks.onError?.(error);
      return [];
    }
    const fresh = events.filter((event) => event.seq > this.cursor);
    if (fresh.length > 0) {
      this.cursor = fresh[fresh.length - 1].seq;
      this.callbacks.onEvents(fresh);
    }
    return fresh;
  }

  start(intervalMs = 1500): void {
    if (this.timer !== null) {
      return;
    }
    void this.tick();
    this.timer = setInterval(() => void this.tick(), intervalMs);
  }

  stop(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }

  get running(): boolean {
    return this.timer !== null;
  }
}
