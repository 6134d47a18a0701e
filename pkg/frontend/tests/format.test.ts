import { describe, expect, it } from "vitest";

import {
  analyticsRows,
  formatLatency,
  formatMargin,
  formatNumber,
  formatPercent,
  formatRatio,
  markerWordsOf,
  topicBars,
  traceRows,
} from "../src/format.js";
import { RATING_LABELS, TraceRecord } from "../src/types.js";

const trace: TraceRecord = {
  session_id: "s",
  latency_ms: { nlu: 1.234 },
  matched_template_ids: ["intent:greeting"],
  candidates: [
    { text: "hello", generator: "intent", priority_tier: 1, rule_rank: 1, margin: null, filtered: false },
    { text: "zzz", generator: "neural", priority_tier: 3, rule_rank: 0, margin: -0.4567, filtered: true },
  ],
  chosen_generator: "intent",
  topic_distribution: [0.5, 0.1, 0.1, 0.1, 0.1, 0.1],
  resolved_input: "hello",
};

describe("formatting", () => {
  it("renders ratios as one-decimal percentages", () => {
    expect(formatRatio(0.416)).toBe("41.6%");
    expect(formatRatio(1)).toBe("100.0%");
    expect(formatRatio(0)).toBe("0.0%");
  });

  it("renders served percentages verbatim to one decimal", () => {
    expect(formatPercent(16.64)).toBe("16.6%");
    expect(formatNumber(16.6)).toBe("16.6");
  });

  it("renders margins and latencies", () => {
    expect(formatMargin(null)).toBe("-");
    expect(formatMargin(-0.4567)).toBe("-0.457");
    expect(formatLatency(1.234)).toBe("1.2 ms");
  });

  it("builds trace rows with filtered flags", () => {
    const rows = traceRows(trace);
    expect(rows).toHaveLength(2);
    expect(rows[0]).toMatchObject({ generator: "intent", filtered: false, margin: "-" });
    expect(rows[1]).toMatchObject({ generator: "neural", filtered: true, margin: "-0.457" });
  });

  it("builds six topic bars in fixed order", () => {
    const bars = topicBars(trace);
    expect(bars).toHaveLength(6);
    expect(bars[0]).toMatchObject({ topic: "Politics", label: "50.0%" });
  });

  it("exposes the five-point rubric", () => {
    expect(Object.keys(RATING_LABELS)).toHaveLength(5);
    expect(RATING_LABELS[1]).toBe("Not human readable reply");
    expect(RATING_LABELS[5]).toBe("Excellent engaging and meaningful reply");
  });
});

describe("analytics rows", () => {
  const stats = {
    session_count: 2,
    mean_turns: 16.6,
    median_turns: 8,
    marker_word_pct: { love: 23.3 },
    generator_usage: {
      intent: 0.025, backstory: 0.073, entity_template: 0, qa: 0.269,
      retrieval: 0.223, neural: 0.41,
    },
  };
  const perRating = { "5": stats } as Record<string, typeof stats>;

  it("passes served values through, ratios as percentages", () => {
    const rows = analyticsRows(perRating, ["love"]);
    const byLabel = Object.fromEntries(rows.map((r) => [r.label, r.cells]));
    expect(byLabel["Mean dialog turns"][4]).toBe("16.6");
    expect(byLabel["Sessions"][4]).toBe("2");
    expect(byLabel['Sessions with "love"'][4]).toBe("23.3%");
    expect(byLabel["Generator neural"][4]).toBe("41.0%");
    // absent ratings render as zero cells
    expect(byLabel["Sessions"][0]).toBe("0");
  });

  it("usage ratios render summing to about 100%", () => {
    const rows = analyticsRows(perRating, []);
    const usage = rows
      .filter((r) => r.label.startsWith("Generator "))
      .map((r) => parseFloat(r.cells[4]));
    const total = usage.reduce((a, b) => a + b, 0);
    expect(Math.abs(total - 100)).toBeLessThan(0.2);
  });

  it("discovers marker words from the served table", () => {
    expect(markerWordsOf(perRating)).toEqual(["love"]);
    expect(markerWordsOf({})).toEqual([]);
  });
});
