import type { Transport } from "./api.js";
import { decodePixels } from "./decode.js";
import type { TrialPayload } from "./types.js";

/** Rendering surface the state machine drives; DOM-free for testing. */
export interface TrialView {
  /** Paint the trial; shownAt is captured immediately after this returns. */
  showTrial(payload: TrialPayload, pixels: Uint8Array): void;
  showError(message: string): void;
  showRetryBanner(visible: boolean): void;
  setCompleted(count: number): void;
}

export type LabelerState = "idle" | "loading" | "shown" | "retry" | "submitting" | "failed";

/** One active trial at a time: fetch, show, take exactly one selection,
 * submit, advance.  Submissions are serialized; a second click or keypress
 * while one is in flight is ignored, and responses for a trial that is no
 * longer current are discarded. */
export class Labeler {
  private state: LabelerState = "idle";
  private current: TrialPayload | null = null;
  private shownAt = 0;
  private pendingSelection = 0;
  private pendingElapsed = 0;
  completed = 0;

  constructor(
    private readonly transport: Transport,
    private readonly view: TrialView,
    private readonly session: string,
    private readonly clock: () => number = () => performance.now(),
  ) {}

  getState(): LabelerState {
    return this.state;
  }

  currentTrialId(): string | null {
    return this.current ? this.current.trial_id : null;
  }

  async start(): Promise<void> {
    await this.advance();
  }

  private async advance(): Promise<void> {
    this.state = "loading";
    this.view.showRetryBanner(false);
    let payload: TrialPayload;
    try {
      payload = await this.transport.getTrial(this.session);
    } catch (error) {
      this.state = "failed";
      this.view.showError(`could not fetch a trial: ${String(error)}`);
      return;
    }
    let pixels: Uint8Array;
    try {
      pixels = decodePixels(payload.pixels_b64, payload.width);
    } catch (error) {
      this.state = "failed";
      this.current = null;
      this.view.showError(String(error));
      return;
    }
    this.current = payload;
    this.view.showTrial(payload, pixels);
    this.shownAt = this.clock();
    this.state = "shown";
  }

  /** Submit a selection for the current trial (button and keyboard paths). */
  async select(choice: number): Promise<void> {
    if (this.state !== "shown" || this.current === null) {
      return;
    }
    if (!Number.isInteger(choice) || choice < -1 || choice > 9) {
      return;
    }
    const elapsed = Math.max(0, Math.round(this.clock() - this.shownAt));
    await this.submit(choice, elapsed);
  }

  /** Re-send the preserved selection after a network failure. */
  async retrySubmit(): Promise<void> {
    if (this.state !== "retry") {
      return;
    }
    await this.submit(this.pendingSelection, this.pendingElapsed);
  }

  private async submit(choice: number, elapsed: number): Promise<void> {
    const trial = this.current;
    if (trial === null) {
      return;
    }
    this.state = "submitting";
    let status: number;
    try {
      status = await this.transport.postResponse({
        trial_id: trial.trial_id,
        selection: choice,
        elapsed_ms: elapsed,
      });
    } catch {
      // Network failure: keep the trial on screen, preserve the selection
      // and its reaction time, and offer a manual retry.
      if (this.current === trial) {
        this.pendingSelection = choice;
        this.pendingElapsed = elapsed;
        this.state = "retry";
        this.view.showRetryBanner(true);
      }
      return;
    }
    if (this.current !== trial) {
      return; // stale: a newer trial took over while this one was in flight
    }
    if (status === 200) {
      this.completed += 1;
      this.view.setCompleted(this.completed);
      await this.advance();
    } else if (status === 409) {
      // Already recorded server-side (e.g. a retried send that had in fact
      // arrived): skip straight to the next trial.
      await this.advance();
    } else {
      this.state = "failed";
      this.view.showError(`response rejected: HTTP ${status}`);
    }
  }
}
