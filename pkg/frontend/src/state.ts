/** Console state: a session, its transcript mirror, traces and analytics.
 *
 * The server transcript is the single source of truth: after every exchange
 * the message list is rebuilt from GET /transcript, and analytics render
 * exactly what the server computed.
 */

import { ApiError, ConsoleApi } from "./api.js";
import type { AnalyticsResponse, TraceRecord, TurnRecord } from "./types.js";

export interface ConsoleState {
  sessionId: string | null;
  messages: TurnRecord[];
  /** traces keyed by the bot turn index they produced */
  traces: Map<number, TraceRecord>;
  rating: number | null;
  analytics: AnalyticsResponse | null;
  banner: string | null;
  sessionExpired: boolean;
  busy: boolean;
}

export type Listener = (state: ConsoleState) => void;

export class ConsoleController {
  readonly state: ConsoleState = {
    sessionId: null,
    messages: [],
    traces: new Map(),
    rating: null,
    analytics: null,
    banner: null,
    sessionExpired: false,
    busy: false,
  };

  private listeners: Listener[] = [];

  constructor(private api: ConsoleApi) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  async startSession(): Promise<void> {
    this.state.sessionId = await this.api.createSession();
    this.state.messages = [];
    this.state.traces = new Map();
    this.state.rating = null;
    this.state.banner = null;
    this.state.sessionExpired = false;
    this.emit();
  }

  async send(text: string): Promise<void> {
    if (!this.state.sessionId || !text.trim()) return;
    this.state.busy = true;
    this.state.banner = null;
    this.emit();
    try {
      const response = await this.api.sendMessage(this.state.sessionId, text);
      await this.refreshTranscript();
      const botTurns = this.state.messages.filter((m) => m.speaker === "bot");
      const last = botTurns[botTurns.length - 1];
      if (last) this.state.traces.set(last.turn_index, response.trace);
    } catch (err) {
      this.handleError(err);
    } finally {
      this.state.busy = false;
      this.emit();
    }
  }

  async refreshTranscript(): Promise<void> {
    if (!this.state.sessionId) return;
    const transcript = await this.api.getTranscript(this.state.sessionId);
    this.state.messages = transcript.turns;
    this.state.rating = transcript.rating ?? null;
  }

  traceFor(botTurnIndex: number): TraceRecord | null {
    return this.state.traces.get(botTurnIndex) ?? null;
  }

  async submitRating(rating: number): Promise<boolean> {
    if (!this.state.sessionId) return false;
    try {
      await this.api.submitRating(this.state.sessionId, rating);
      this.state.rating = rating;
      this.state.banner = null;
      this.emit();
      return true;
    } catch (err) {
      this.handleError(err);
      this.emit();
      return false;
    }
  }

  async refreshAnalytics(): Promise<void> {
    try {
      this.state.analytics = await this.api.getAnalytics();
      this.state.banner = null;
    } catch (err) {
      this.handleError(err);
    }
    this.emit();
  }

  private handleError(err: unknown): void {
    if (err instanceof ApiError) {
      this.state.banner = err.status === 0 ? err.message : `${err.status}: ${err.message}`;
      if (err.status === 404) this.state.sessionExpired = true;
    } else {
      this.state.banner = String(err);
    }
  }
}
