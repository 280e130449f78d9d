/**
 * Periodic draft persistence. Every interval the current editor text is
 * sent to the draft endpoint if it changed; transient failures retry
 * with capped exponential backoff and never block editing.
 */

export interface AutosaveOptions {
  intervalMs?: number;
  maxBackoffMs?: number;
}

export const DEFAULT_AUTOSAVE_INTERVAL_MS = 30_000;

export class AutosaveLoop {
  private readonly intervalMs: number;
  private readonly maxBackoffMs: number;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private backoffMs = 0;
  private lastSaved: string | null = null;
  private running = false;
  private saving = false;

  constructor(
    private readonly currentText: () => string,
    private readonly save: (text: string) => Promise<void>,
    options: AutosaveOptions = {},
    /** Canonical acknowledged text; matching it means no unsynced edits. */
    private readonly baseline: () => string | null = () => null,
  ) {
    this.intervalMs = options.intervalMs ?? DEFAULT_AUTOSAVE_INTERVAL_MS;
    this.maxBackoffMs = options.maxBackoffMs ?? 8 * this.intervalMs;
  }

  start(alreadySaved: string | null = null): void {
    this.lastSaved = alreadySaved;
    this.backoffMs = 0;
    this.running = true;
    this.schedule(this.intervalMs);
  }

  stop(): void {
    this.running = false;
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = null;
  }

  /** After an explicit save/discard elsewhere, avoid a redundant PUT. */
  markSaved(text: string | null): void {
    this.lastSaved = text;
  }

  private schedule(delayMs: number): void {
    if (!this.running) return;
    if (this.timer !== null) clearTimeout(this.timer);
    this.timer = setTimeout(() => void this.tick(), delayMs);
  }

  private async tick(): Promise<void> {
    if (!this.running || this.saving) {
      this.schedule(this.intervalMs);
      return;
    }
    const text = this.currentText();
    if (text === this.lastSaved || text === this.baseline()) {
      this.schedule(this.intervalMs);
      return;
    }
    this.saving = true;
    try {
      await this.save(text);
      this.lastSaved = text;
      this.backoffMs = 0;
      this.schedule(this.intervalMs);
    } catch {
      this.backoffMs = Math.min(
        this.maxBackoffMs,
        this.backoffMs === 0 ? this.intervalMs : this.backoffMs * 2,
      );
      this.schedule(this.backoffMs);
    } finally {
      this.saving = false;
    }
  }
}
