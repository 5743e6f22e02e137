// Thin fetch wrapper over the annotation service's /api endpoints.

import type { Decision, Stats, TaskView } from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

async function raiseForStatus(response: Response): Promise<void> {
  if (response.ok) return;
  let detail = response.statusText;
  try {
    const body = await response.json();
    if (body && typeof body.detail === "string") detail = body.detail;
  } catch {
    // non-JSON error body; keep the status text
  }
  throw new ApiError(response.status, detail);
}

export class ApiClient {
  constructor(
    private readonly fetchImpl: FetchLike,
    private readonly baseUrl = "",
    private readonly client = "annotation-ui",
  ) {}

  /** Lease the next pending task, or null when the queue is drained (204). */
  async nextTask(): Promise<TaskView | null> {
    const url = `${this.baseUrl}/api/tasks/next?client=${encodeURIComponent(this.client)}`;
    const response = await this.fetchImpl(url);
    await raiseForStatus(response);
    if (response.status === 204) return null;
    return (await response.json()) as TaskView;
  }

  async postDecision(postId: string, decision: Decision): Promise<TaskView> {
    const url = `${this.baseUrl}/api/tasks/${encodeURIComponent(postId)}/decision`;
    const response = await this.fetchImpl(url, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ decided_by: this.client, ...decision }),
    });
    await raiseForStatus(response);
    return (await response.json()) as TaskView;
  }

  async stats(): Promise<Stats> {
    const response = await this.fetchImpl(`${this.baseUrl}/api/stats`);
    await raiseForStatus(response);
    return (await response.json()) as Stats;
  }
}
