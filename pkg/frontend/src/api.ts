import {
  AnswerResult,
  ApiError,
  NextQuestion,
  Pair,
  ServiceError,
  SessionView,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ServiceClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    const body = await response.json();
    if (!response.ok) {
      throw new ServiceError(response.status, body as ApiError);
    }
    return body as T;
  }

  createSession(n: number, itemLabels?: string[], budget?: number): Promise<SessionView> {
    return this.request<SessionView>("/sessions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ n, item_labels: itemLabels ?? null, budget: budget ?? null }),
    });
  }

  getSession(id: string): Promise<SessionView> {
    return this.request<SessionView>(`/sessions/${id}`);
  }

  nextQuestion(id: string): Promise<NextQuestion> {
    return this.request<NextQuestion>(`/sessions/${id}/next`);
  }

  abandon(id: string): Promise<AnswerResult> {
    return this.request<AnswerResult>(`/sessions/${id}/abandon`, { method: "POST" });
  }

  private submitRaw(id: string, pair: Pair, value: number): Promise<AnswerResult> {
    return this.request<AnswerResult>(`/sessions/${id}/answers`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ pair, value }),
    });
  }

  /**
   * At-most-once submission.  The idempotency key of an answer is the
   * (session, answered-count, pair) triple: if the network fails after the
   * service applied the write, the follow-up state read shows the count
   * advanced past `answeredBefore` and the answer is not sent again.
   */
  async submitAnswer(
    id: string,
    pair: Pair,
    value: number,
    answeredBefore: number,
    attempts = 3,
  ): Promise<AnswerResult> {
    let lastError: unknown = null;
    for (let attempt = 0; attempt < attempts; attempt++) {
      try {
        return await this.submitRaw(id, pair, value);
      } catch (err) {
        if (err instanceof ServiceError) throw err; // domain errors are final
        lastError = err;
        const session = await this.getSessionSafe(id);
        if (session && session.answered > answeredBefore) {
          return { state: session.state, estimate: session.estimate };
        }
      }
    }
    throw lastError instanceof Error ? lastError : new Error("network failure");
  }

  private async getSessionSafe(id: string): Promise<SessionView | null> {
    try {
      return await this.getSession(id);
    } catch {
      return null;
    }
  }
}
