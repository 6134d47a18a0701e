/** Thin typed client over the five console endpoints. */

import type {
  AnalyticsResponse,
  MessageResponse,
  TranscriptResponse,
} from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

export class ConsoleApi {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.baseUrl + path, init);
    } catch (err) {
      throw new ApiError(0, `network error: ${String(err)}`);
    }
    const body = await response.json().catch(() => ({}));
    if (!response.ok) {
      const detail = typeof body?.error === "string" ? body.error : response.statusText;
      throw new ApiError(response.status, detail);
    }
    return body as T;
  }

  private post<T>(path: string, payload: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  async createSession(): Promise<string> {
    const body = await this.post<{ session_id: string }>("/sessions", {});
    return body.session_id;
  }

  sendMessage(sessionId: string, text: string): Promise<MessageResponse> {
    return this.post<MessageResponse>(
      `/sessions/${encodeURIComponent(sessionId)}/messages`,
      { text },
    );
  }

  submitRating(sessionId: string, rating: number): Promise<unknown> {
    return this.post(`/sessions/${encodeURIComponent(sessionId)}/rating`, { rating });
  }

  getTranscript(sessionId: string): Promise<TranscriptResponse> {
    return this.request<TranscriptResponse>(
      `/sessions/${encodeURIComponent(sessionId)}/transcript`,
    );
  }

  getAnalytics(): Promise<AnalyticsResponse> {
    return this.request<AnalyticsResponse>("/analytics");
  }
}
