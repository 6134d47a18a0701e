/** Pure rendering helpers; all values come from the server verbatim. */

import type { CandidateRecord, RatingStatsRecord, TraceRecord } from "./types.js";
import { GENERATORS, TOPICS } from "./types.js";

/** 0..1 ratio as a percentage with one decimal, e.g. 0.416 -> "41.6%". */
export function formatRatio(ratio: number): string {
  return `${(100 * ratio).toFixed(1)}%`;
}

/** Already-percent value with one decimal, e.g. 16.64 -> "16.6%". */
export function formatPercent(pct: number): string {
  return `${pct.toFixed(1)}%`;
}

export function formatNumber(value: number, decimals = 1): string {
  return value.toFixed(decimals);
}

export function formatLatency(ms: number): string {
  return `${ms.toFixed(1)} ms`;
}

export function formatMargin(margin: number | null): string {
  return margin === null ? "-" : margin.toFixed(3);
}

export interface TraceRow {
  generator: string;
  text: string;
  margin: string;
  filtered: boolean;
  tier: number;
}

export function traceRows(trace: TraceRecord): TraceRow[] {
  return trace.candidates.map((c: CandidateRecord) => ({
    generator: c.generator,
    text: c.text,
    margin: formatMargin(c.margin),
    filtered: c.filtered,
    tier: c.priority_tier,
  }));
}

export interface TopicBar {
  topic: string;
  probability: number;
  label: string;
}

export function topicBars(trace: TraceRecord): TopicBar[] {
  return trace.topic_distribution.map((p, i) => ({
    topic: TOPICS[i] ?? `topic ${i}`,
    probability: p,
    label: formatRatio(p),
  }));
}

export interface AnalyticsRow {
  label: string;
  cells: string[]; // one per rating 1..5
}

export function analyticsRows(
  perRating: Record<string, RatingStatsRecord>,
  markerWords: string[],
): AnalyticsRow[] {
  const ratings = ["1", "2", "3", "4", "5"];
  const stats = (r: string): RatingStatsRecord | undefined => perRating[r];
  const rows: AnalyticsRow[] = [
    {
      label: "Sessions",
      cells: ratings.map((r) => String(stats(r)?.session_count ?? 0)),
    },
    {
      label: "Mean dialog turns",
      cells: ratings.map((r) => formatNumber(stats(r)?.mean_turns ?? 0)),
    },
    {
      label: "Median dialog turns",
      cells: ratings.map((r) => formatNumber(stats(r)?.median_turns ?? 0, 0)),
    },
  ];
  for (const word of markerWords) {
    rows.push({
      label: `Sessions with "${word}"`,
      cells: ratings.map((r) => formatPercent(stats(r)?.marker_word_pct[word] ?? 0)),
    });
  }
  for (const generator of GENERATORS) {
    rows.push({
      label: `Generator ${generator}`,
      cells: ratings.map((r) => formatRatio(stats(r)?.generator_usage[generator] ?? 0)),
    });
  }
  return rows;
}

export function markerWordsOf(perRating: Record<string, RatingStatsRecord>): string[] {
  for (const stats of Object.values(perRating)) {
    const words = Object.keys(stats.marker_word_pct);
    if (words.length > 0) return words;
  }
  return [];
}
