/** JSON shapes served by the dialog engine's HTTP API. */

export interface TurnRecord {
  session_id: string;
  turn_index: number;
  speaker: "user" | "bot";
  text: string;
  timestamp: number;
}

export interface CandidateRecord {
  text: string;
  generator: string;
  priority_tier: number;
  rule_rank: number;
  margin: number | null;
  filtered: boolean;
}

export interface TraceRecord {
  session_id: string;
  latency_ms: Record<string, number>;
  matched_template_ids: string[];
  candidates: CandidateRecord[];
  chosen_generator: string | null;
  topic_distribution: number[];
  resolved_input: string;
}

export interface TranscriptResponse {
  turns: TurnRecord[];
  rating?: number;
}

export interface MessageResponse {
  reply: string;
  trace: TraceRecord;
}

export interface RatingStatsRecord {
  session_count: number;
  mean_turns: number;
  median_turns: number;
  marker_word_pct: Record<string, number>;
  generator_usage: Record<string, number>;
}

export interface AnalyticsResponse {
  per_rating: Record<string, RatingStatsRecord>;
  overall: {
    mean_rating: number;
    pct_rated_ge_3: number;
    rating_histogram: Record<string, number>;
    rated_sessions: number;
    unrated_sessions: number;
  };
}

export const TOPICS = [
  "Politics",
  "Life",
  "Sports",
  "Entertainment",
  "Technology",
  "General",
] as const;

export const GENERATORS = [
  "intent",
  "backstory",
  "entity_template",
  "qa",
  "retrieval",
  "neural",
] as const;

/** Five-point rating rubric, mirrored from the server's analytics module. */
export const RATING_LABELS: Record<number, string> = {
  1: "Not human readable reply",
  2: "Understandable and somehow related reply",
  3: "Acceptable but not very meaningful and not very engaging reply",
  4: "Good not very engaging reply",
  5: "Excellent engaging and meaningful reply",
};
