// Keyboard-driven review loop.
//
// Review mode:    1 = confirm the proposal, 2 = start an override, 0 = skip.
// Override mode:  b       toggles the binary label,
//                 1-9, 0  toggle the ten sentiment labels in fixed order
//                         (1 is the first label, 0 the tenth),
//                 Enter   submits, Escape returns to review mode.
//
// Every user action results in exactly one POST: an in-flight guard keyed
// by task id swallows repeated keystrokes until the service acknowledges,
// and a network failure retains the decision and retries it.

import { ApiClient, ApiError } from "./api.js";
import {
  BINARY_LABELS,
  Decision,
  HINDUPHOBIC,
  POSITIVE_NEUTRAL,
  SENTIMENT_LABELS,
  Stats,
  TaskView,
} from "./types.js";

export type Mode = "loading" | "review" | "override" | "done";

export interface ControllerState {
  mode: Mode;
  task: TaskView | null;
  draftBinary: string;
  draftSentiments: boolean[];
  stats: Stats | null;
  message: string;
}

const MAX_RETRIES = 5;

export class ReviewController {
  private state: ControllerState = {
    mode: "loading",
    task: null,
    draftBinary: POSITIVE_NEUTRAL,
    draftSentiments: SENTIMENT_LABELS.map(() => false),
    stats: null,
    message: "",
  };
  /** Task ids with an unacknowledged POST; blocks double submission. */
  private readonly inFlight = new Set<string>();

  constructor(
    private readonly api: ApiClient,
    private readonly onChange: (state: ControllerState) => void = () => {},
    private readonly delay: (ms: number) => Promise<void> = (ms) =>
      new Promise((resolve) => setTimeout(resolve, ms)),
    private readonly retryDelayMs = 1000,
  ) {}

  getState(): ControllerState {
    return this.state;
  }

  async start(): Promise<void> {
    await this.refreshStats();
    await this.loadNext();
  }

  async handleKey(key: string): Promise<void> {
    if (this.state.mode === "review") {
      await this.handleReviewKey(key);
    } else if (this.state.mode === "override") {
      await this.handleOverrideKey(key);
    }
  }

  private async handleReviewKey(key: string): Promise<void> {
    const task = this.state.task;
    if (task === null) return;
    if (key === "1") {
      await this.submit(task, { action: "confirm" });
    } else if (key === "2") {
      this.enterOverride(task);
    } else if (key === "0") {
      await this.submit(task, { action: "skip" });
    }
  }

  private enterOverride(task: TaskView): void {
    // Seed the draft from the machine proposal so an override starts from
    // what the annotator is looking at.
    this.update({
      mode: "override",
      draftBinary: task.proposed_binary ?? POSITIVE_NEUTRAL,
      draftSentiments: SENTIMENT_LABELS.map((label) =>
        task.proposed_sentiments.includes(label),
      ),
    });
  }

  private async handleOverrideKey(key: string): Promise<void> {
    const task = this.state.task;
    if (task === null) return;
    if (key === "Escape") {
      this.update({ mode: "review", message: "" });
      return;
    }
    if (key === "b") {
      const flipped =
        this.state.draftBinary === HINDUPHOBIC ? POSITIVE_NEUTRAL : HINDUPHOBIC;
      this.update({ draftBinary: flipped });
      return;
    }
    if (/^[0-9]$/.test(key)) {
      // 1..9 address the first nine labels, 0 the tenth
      const index = key === "0" ? 9 : Number(key) - 1;
      const draft = [...this.state.draftSentiments];
      draft[index] = !draft[index];
      this.update({ draftSentiments: draft });
      return;
    }
    if (key === "Enter") {
      const sentiments = SENTIMENT_LABELS.filter(
        (_, i) => this.state.draftSentiments[i],
      );
      await this.submit(task, {
        action: "override",
        binary: this.state.draftBinary,
        sentiments,
      });
    }
  }

  private async submit(task: TaskView, decision: Decision): Promise<void> {
    if (this.inFlight.has(task.post_id)) return;
    this.inFlight.add(task.post_id);
    this.update({ message: "submitting…" });
    let advance = false;
    try {
      for (let attempt = 0; ; attempt++) {
        try {
          await this.api.postDecision(task.post_id, decision);
          this.update({ message: "" });
          advance = true;
          break;
        } catch (error) {
          if (error instanceof ApiError) {
            if (error.status === 409) {
              // Already decided elsewhere; drop and move on.
              this.update({ message: "task already decided; refreshing" });
              advance = true;
              break;
            }
            this.update({ message: `rejected: ${error.message}` });
            break;
          }
          if (attempt + 1 >= MAX_RETRIES) {
            this.update({ message: "submission failed; try again" });
            break;
          }
          // Network failure: the decision is retained and retried.
          this.update({
            message: `network error; retrying (${attempt + 1}/${MAX_RETRIES})`,
          });
          await this.delay(this.retryDelayMs);
        }
      }
    } finally {
      this.inFlight.delete(task.post_id);
    }
    if (advance) {
      await this.refreshStats();
      await this.loadNext();
    }
  }

  private async loadNext(): Promise<void> {
    this.update({ mode: "loading" });
    const task = await this.api.nextTask();
    if (task === null) {
      this.update({ mode: "done", task: null });
      return;
    }
    this.update({
      mode: "review",
      task,
      draftBinary: task.proposed_binary ?? POSITIVE_NEUTRAL,
      draftSentiments: SENTIMENT_LABELS.map((label) =>
        task.proposed_sentiments.includes(label),
      ),
    });
  }

  private async refreshStats(): Promise<void> {
    try {
      this.update({ stats: await this.api.stats() });
    } catch {
      // stats are advisory; never block the review loop on them
    }
  }

  private update(partial: Partial<ControllerState>): void {
    this.state = { ...this.state, ...partial };
    this.onChange(this.state);
  }
}

export { BINARY_LABELS, SENTIMENT_LABELS };
