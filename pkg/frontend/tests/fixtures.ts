// In-memory fixture service implementing the annotation API contract:
// leased task handout, 409 on a second decision, live stats.

import type { FetchLike } from "../src/api.js";
import type { TaskView } from "../src/types.js";

export function makeTask(i: number, extra: Partial<TaskView> = {}): TaskView {
  return {
    post_id: `post-${i}`,
    text: `sample text number ${i}`,
    country: "India",
    month: "2020-05",
    proposed_binary: i % 2 === 0 ? "hinduphobic" : "positive_neutral",
    proposed_confidence: 0.75,
    proposed_sentiments: i % 2 === 0 ? ["annoyed"] : ["optimistic"],
    status: "pending",
    binary: null,
    sentiments: [],
    ...extra,
  };
}

export interface RecordedDecision {
  postId: string;
  body: {
    action: string;
    binary?: string | null;
    sentiments?: string[];
    decided_by?: string;
  };
}

export class FixtureService {
  readonly decisions: RecordedDecision[] = [];
  readonly requestLog: string[] = [];
  private readonly decided = new Set<string>();
  /** When set, the next N POSTs fail as network errors. */
  failNextPosts = 0;
  /** When set, POSTs resolve only after this promise (for in-flight tests). */
  postGate: Promise<void> | null = null;

  constructor(private readonly tasks: TaskView[]) {}

  get fetch(): FetchLike {
    return async (input, init) => this.route(input, init);
  }

  private async route(url: string, init?: RequestInit): Promise<Response> {
    const method = init?.method ?? "GET";
    this.requestLog.push(`${method} ${url}`);
    if (url.includes("/api/tasks/next")) {
      const next = this.tasks.find((t) => !this.decided.has(t.post_id));
      if (next === undefined) return new Response(null, { status: 204 });
      return json({
        ...next,
        binary_choices: ["hinduphobic", "positive_neutral"],
      });
    }
    const decisionMatch = url.match(/\/api\/tasks\/([^/]+)\/decision$/);
    if (decisionMatch !== null && method === "POST") {
      if (this.postGate !== null) await this.postGate;
      if (this.failNextPosts > 0) {
        this.failNextPosts -= 1;
        throw new TypeError("fetch failed (simulated network error)");
      }
      const postId = decodeURIComponent(decisionMatch[1]);
      if (this.decided.has(postId)) {
        return json({ detail: `already decided: ${postId}` }, 409);
      }
      this.decided.add(postId);
      const body = JSON.parse(String(init?.body ?? "{}"));
      this.decisions.push({ postId, body });
      const task = this.tasks.find((t) => t.post_id === postId);
      return json({ ...task, status: body.action, binary: body.binary ?? null });
    }
    if (url.includes("/api/stats")) {
      return json({
        total: this.tasks.length,
        decided: this.decisions.length,
        confirmed: this.count("confirm"),
        overridden: this.count("override"),
        skipped: this.count("skip"),
        agreement: null,
        override_counts: {},
      });
    }
    return json({ detail: "not found" }, 404);
  }

  /** Mark a task decided server-side without going through the client. */
  decideExternally(postId: string): void {
    this.decided.add(postId);
  }

  private count(action: string): number {
    return this.decisions.filter((d) => d.body.action === action).length;
  }
}

function json(payload: unknown, status = 200): Response {
  return new Response(JSON.stringify(payload), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}
