"""Offline statistics over session transcripts and trace logs.

Per-rating tables cover rated sessions only; unrated sessions are counted
separately. "Dialog turns" counts user turns. Medians are order-statistic
exact, taking the lower of the two middle values for even counts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .session import GENERATORS, Session, Trace

RATINGS = (1, 2, 3, 4, 5)

DEFAULT_MARKER_WORDS = ("love", "friend", "hate")

RATING_MEANINGS = {
    1: "Not human readable reply",
    2: "Understandable and somehow related reply",
    3: "Acceptable but not very meaningful and not very engaging reply",
    4: "Good not very engaging reply",
    5: "Excellent engaging and meaningful reply",
}


def rating_meaning(r: int) -> str:
    if r not in RATING_MEANINGS:
        raise ValueError(f"rating must be in [1, 5], got {r!r}")
    return RATING_MEANINGS[r]


@dataclass
class RatingStats:
    session_count: int = 0
    mean_turns: float = 0.0
    median_turns: float = 0.0
    marker_word_pct: dict[str, float] = field(default_factory=dict)
    generator_usage: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "session_count": self.session_count,
            "mean_turns": self.mean_turns,
            "median_turns": self.median_turns,
            "marker_word_pct": self.marker_word_pct,
            "generator_usage": self.generator_usage,
        }


@dataclass
class StatsTable:
    per_rating: dict[int, RatingStats] = field(default_factory=dict)
    mean_rating: float = 0.0
    pct_rated_ge_3: float = 0.0
    rating_histogram: dict[int, int] = field(default_factory=dict)
    rated_sessions: int = 0
    unrated_sessions: int = 0

    def to_dict(self) -> dict:
        return {
            "per_rating": {str(r): s.to_dict() for r, s in self.per_rating.items()},
            "overall": {
                "mean_rating": self.mean_rating,
                "pct_rated_ge_3": self.pct_rated_ge_3,
                "rating_histogram": {str(r): c for r, c in self.rating_histogram.items()},
                "rated_sessions": self.rated_sessions,
                "unrated_sessions": self.unrated_sessions,
            },
        }


def _lower_median(values: list[int]) -> float:
    ordered = sorted(values)
    return float(ordered[(len(ordered) - 1) // 2])


def compute_stats(
    sessions: list[Session],
    traces: list[tuple[str, Trace]],
    marker_words: tuple[str, ...] = DEFAULT_MARKER_WORDS,
) -> StatsTable:
    """Pure function of the logs; identical inputs give an identical table."""
    table = StatsTable()
    rated = [s for s in sessions if s.rating is not None]
    table.rated_sessions = len(rated)
    table.unrated_sessions = len(sessions) - len(rated)
    table.rating_histogram = {r: 0 for r in RATINGS}
    for session in rated:
        table.rating_histogram[session.rating] += 1
    if rated:
        table.mean_rating = sum(s.rating for s in rated) / len(rated)
        table.pct_rated_ge_3 = 100.0 * sum(1 for s in rated if s.rating >= 3) / len(rated)

    rating_by_session = {s.id: s.rating for s in rated}
    chosen: dict[int, dict[str, int]] = {r: {g: 0 for g in GENERATORS} for r in RATINGS}
    chosen_totals = {r: 0 for r in RATINGS}
    for session_id, trace in traces:
        rating = rating_by_session.get(session_id)
        if rating is None or trace.chosen_generator is None:
            continue
        chosen[rating][trace.chosen_generator] += 1
        chosen_totals[rating] += 1

    for r in RATINGS:
        group = [s for s in rated if s.rating == r]
        stats = RatingStats(session_count=len(group))
        if group:
            turn_counts = [sum(1 for t in s.turns if t.speaker == "user") for s in group]
            stats.mean_turns = sum(turn_counts) / len(turn_counts)
            stats.median_turns = _lower_median(turn_counts)
            for word in marker_words:
                needle = word.lower()
                hits = sum(
                    1
                    for s in group
                    if any(needle in t.text.lower() for t in s.turns if t.speaker == "user")
                )
                stats.marker_word_pct[word] = 100.0 * hits / len(group)
        if chosen_totals[r] > 0:
            stats.generator_usage = {
                g: chosen[r][g] / chosen_totals[r] for g in GENERATORS
            }
        table.per_rating[r] = stats
    return table


def format_table(table: StatsTable, marker_words: tuple[str, ...] = DEFAULT_MARKER_WORDS) -> str:
    """Aligned plain-text rendering of the stats table."""
    headers = ["Statistics"] + [f"Rating:{r}" for r in RATINGS]
    rows: list[list[str]] = []
    per = table.per_rating
    rows.append(["Sessions"] + [str(per[r].session_count) for r in RATINGS])
    rows.append(["Mean Dialog Turns"] + [f"{per[r].mean_turns:.1f}" for r in RATINGS])
    rows.append(["Median Dialog Turns"] + [f"{per[r].median_turns:.0f}" for r in RATINGS])
    for word in marker_words:
        rows.append(
            [f'Sessions with "{word}"']
            + [f"{per[r].marker_word_pct.get(word, 0.0):.1f} %" for r in RATINGS]
        )
    for generator in GENERATORS:
        rows.append(
            [f"Generator {generator}"]
            + [f"{100.0 * per[r].generator_usage.get(generator, 0.0):.1f} %" for r in RATINGS]
        )
    widths = [max(len(headers[i]), *(len(row[i]) for row in rows)) for i in range(len(headers))]
    lines = ["  ".join(h.ljust(widths[i]) for i, h in enumerate(headers))]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    lines.append("")
    lines.append(
        f"rated={table.rated_sessions} unrated={table.unrated_sessions} "
        f"mean_rating={table.mean_rating:.2f} rated_ge_3={table.pct_rated_ge_3:.1f}%"
    )
    return "\n".join(lines)


def stats_json(table: StatsTable) -> str:
    return json.dumps(table.to_dict(), indent=2)


def load_logs(store_dir: str | Path):
    """Sessions and traces from a session-store directory."""
    from .session import SessionStore

    store = SessionStore(store_dir)
    return store.load_all_sessions(), store.load_traces()
