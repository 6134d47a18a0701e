"""Conversation state: turns, sessions, reply candidates and trace logging.

Persistence is line-delimited JSON, one self-describing record per line:

* transcript, one file per session (``<store>/<session_id>.jsonl``):
  - meta record    ``{"session_id", "created_at"}``
  - turn record    ``{"session_id", "turn_index", "speaker", "text", "timestamp"}``
  - rating record  ``{"session_id", "rating"}`` (re-rating appends a new record;
    the last one wins)
* trace log, one global file (``<store>/traces.jsonl``): one record per
  ``log_trace`` call with the fields of :class:`Trace` plus ``session_id``.

Appends for a single session are serialized by a per-session lock; distinct
sessions may be written concurrently. Each record is written with a single
``write()`` call so lines never interleave partially.
"""

from __future__ import annotations

import json
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from .hashing import fnv1a64

SPEAKERS = ("user", "bot")

GENERATORS = ("intent", "backstory", "entity_template", "qa", "retrieval", "neural")

#: strategy tier per generator: 1 = rule, 2 = knowledge, 3 = ensemble.
TIER_BY_GENERATOR = {
    "intent": 1,
    "backstory": 1,
    "entity_template": 1,
    "qa": 2,
    "retrieval": 3,
    "neural": 3,
}

#: fixed order of the rule-based generators inside tier 1.
RULE_RANK_BY_GENERATOR = {"intent": 1, "backstory": 2, "entity_template": 3}

TRACE_FILE = "traces.jsonl"


@dataclass
class Turn:
    speaker: str
    text: str
    timestamp: int
    turn_index: int

    def to_record(self, session_id: str) -> dict:
        return {
            "session_id": session_id,
            "turn_index": self.turn_index,
            "speaker": self.speaker,
            "text": self.text,
            "timestamp": self.timestamp,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Turn":
        return cls(
            speaker=rec["speaker"],
            text=rec["text"],
            timestamp=rec["timestamp"],
            turn_index=rec["turn_index"],
        )


@dataclass
class Session:
    id: str
    created_at: int
    turns: list[Turn] = field(default_factory=list)
    rating: int | None = None


@dataclass
class Candidate:
    """A reply candidate tagged with its generator and priority tier."""

    text: str
    generator: str
    priority_tier: int
    rule_rank: int = 0
    margin: float | None = None

    def __post_init__(self):
        if self.generator not in TIER_BY_GENERATOR:
            raise ValueError(f"unknown generator {self.generator!r}")
        if self.priority_tier != TIER_BY_GENERATOR[self.generator]:
            raise ValueError(
                f"generator {self.generator!r} belongs to tier "
                f"{TIER_BY_GENERATOR[self.generator]}, not {self.priority_tier}"
            )

    @classmethod
    def make(cls, text: str, generator: str, margin: float | None = None) -> "Candidate":
        """Build a candidate with tier and rule rank derived from the generator."""
        return cls(
            text=text,
            generator=generator,
            priority_tier=TIER_BY_GENERATOR[generator],
            rule_rank=RULE_RANK_BY_GENERATOR.get(generator, 0),
            margin=margin,
        )

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "generator": self.generator,
            "priority_tier": self.priority_tier,
            "rule_rank": self.rule_rank,
            "margin": self.margin,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Candidate":
        return cls(
            text=d["text"],
            generator=d["generator"],
            priority_tier=d["priority_tier"],
            rule_rank=d.get("rule_rank", 0),
            margin=d.get("margin"),
        )


@dataclass
class TracedCandidate:
    candidate: Candidate
    filtered: bool = False


@dataclass
class Trace:
    """Per-turn record of what the pipeline did and how long each stage took."""

    latency_ms: dict[str, float] = field(default_factory=dict)
    matched_template_ids: list[str] = field(default_factory=list)
    candidates: list[TracedCandidate] = field(default_factory=list)
    chosen_generator: str | None = None
    topic_distribution: list[float] = field(default_factory=list)
    resolved_input: str = ""

    def to_record(self, session_id: str) -> dict:
        return {
            "session_id": session_id,
            "latency_ms": self.latency_ms,
            "matched_template_ids": self.matched_template_ids,
            "candidates": [
                {**tc.candidate.to_dict(), "filtered": tc.filtered} for tc in self.candidates
            ],
            "chosen_generator": self.chosen_generator,
            "topic_distribution": self.topic_distribution,
            "resolved_input": self.resolved_input,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Trace":
        return cls(
            latency_ms=dict(rec.get("latency_ms", {})),
            matched_template_ids=list(rec.get("matched_template_ids", [])),
            candidates=[
                TracedCandidate(Candidate.from_dict(c), bool(c.get("filtered", False)))
                for c in rec.get("candidates", [])
            ],
            chosen_generator=rec.get("chosen_generator"),
            topic_distribution=list(rec.get("topic_distribution", [])),
            resolved_input=rec.get("resolved_input", ""),
        )


def recent_turns(session: Session, n: int = 5) -> list[Turn]:
    """Last ``min(n, len)`` turns in chronological order."""
    if n <= 0:
        raise ValueError("n must be positive")
    return list(session.turns[-n:])


class SessionStore:
    """Disk-backed session registry with append-only transcript files.

    With ``seed`` set, session ids come from a deterministic counter stream so
    two runs over the same inputs produce byte-identical logs; without it,
    ids are random UUIDs.
    """

    def __init__(self, root: str | Path, seed: int | None = None):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._seed = seed
        self._counter = 0
        self._sessions: dict[str, Session] = {}
        self._registry_lock = threading.Lock()
        # Reentrant so a caller can serialize a multi-step exchange with
        # lock_for() while the store methods re-acquire it per append.
        self._session_locks: dict[str, threading.RLock] = {}
        self._trace_lock = threading.Lock()

    # ---------------------------------------------------------------- ids

    def _new_id(self) -> str:
        if self._seed is None:
            return uuid.uuid4().hex
        self._counter += 1
        return f"s{fnv1a64(f'{self._seed}:{self._counter}'):016x}"

    def lock_for(self, session_id: str) -> threading.RLock:
        """Per-session lock; also used by callers to serialize whole exchanges."""
        with self._registry_lock:
            lock = self._session_locks.get(session_id)
            if lock is None:
                lock = self._session_locks[session_id] = threading.RLock()
            return lock

    def _path_for(self, session_id: str) -> Path:
        return self.root / f"{session_id}.jsonl"

    def _append_line(self, path: Path, record: dict) -> None:
        line = json.dumps(record, ensure_ascii=False) + "\n"
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(line)

    # ------------------------------------------------------------ sessions

    def create_session(self, now: int) -> Session:
        with self._registry_lock:
            sid = self._new_id()
        session = Session(id=sid, created_at=now)
        with self.lock_for(sid):
            self._sessions[sid] = session
            self._append_line(self._path_for(sid), {"session_id": sid, "created_at": now})
        return session

    def get(self, session_id: str) -> Session:
        """Look up a live session; raises KeyError if unknown."""
        session = self._sessions.get(session_id)
        if session is None:
            raise KeyError(session_id)
        return session

    def session_ids(self) -> list[str]:
        return sorted(self._sessions)

    def append_turn(self, session: Session, speaker: str, text: str, now: int) -> Turn:
        if speaker not in SPEAKERS:
            raise ValueError(f"speaker must be one of {SPEAKERS}, got {speaker!r}")
        if not text:
            raise ValueError("turn text must be nonempty")
        with self.lock_for(session.id):
            # Keep timestamps nondecreasing even if the caller's clock skews.
            if session.turns and now < session.turns[-1].timestamp:
                now = session.turns[-1].timestamp
            turn = Turn(speaker=speaker, text=text, timestamp=now, turn_index=len(session.turns))
            self._append_line(self._path_for(session.id), turn.to_record(session.id))
            session.turns.append(turn)
        return turn

    def snapshot_turns(self, session: Session) -> list[Turn]:
        """Prefix-consistent copy of the turn list, safe under concurrent appends."""
        with self.lock_for(session.id):
            return list(session.turns)

    def record_rating(self, session: Session, rating: int) -> Session:
        if not isinstance(rating, int) or isinstance(rating, bool) or not 1 <= rating <= 5:
            raise ValueError(f"rating must be an integer in [1, 5], got {rating!r}")
        with self.lock_for(session.id):
            session.rating = rating
            self._append_line(self._path_for(session.id), {"session_id": session.id, "rating": rating})
        return session

    # -------------------------------------------------------------- traces

    @property
    def trace_path(self) -> Path:
        return self.root / TRACE_FILE

    def log_trace(self, session_id: str, trace: Trace) -> None:
        with self._trace_lock:
            self._append_line(self.trace_path, trace.to_record(session_id))

    # ------------------------------------------------------------- reading

    def load_session(self, session_id: str) -> Session:
        """Rebuild a session from its transcript file."""
        path = self._path_for(session_id)
        if not path.exists():
            raise KeyError(session_id)
        session: Session | None = None
        for rec in _read_jsonl(path):
            if "created_at" in rec:
                session = Session(id=rec["session_id"], created_at=rec["created_at"])
            elif "turn_index" in rec:
                assert session is not None, "turn record before meta record"
                session.turns.append(Turn.from_record(rec))
            elif "rating" in rec:
                assert session is not None, "rating record before meta record"
                session.rating = rec["rating"]
        if session is None:
            raise KeyError(session_id)
        return session

    def load_all_sessions(self) -> list[Session]:
        sessions = []
        for path in sorted(self.root.glob("*.jsonl")):
            if path.name == TRACE_FILE:
                continue
            sessions.append(self.load_session(path.stem))
        return sessions

    def load_traces(self) -> list[tuple[str, Trace]]:
        """All logged traces as (session_id, Trace) pairs, in write order."""
        if not self.trace_path.exists():
            return []
        return [(rec["session_id"], Trace.from_record(rec)) for rec in _read_jsonl(self.trace_path)]


def _read_jsonl(path: Path) -> list[dict]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                records.append(json.loads(line))
    return records
