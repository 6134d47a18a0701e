"""Tier-3 retrieval over a local timestamped short-text corpus.

Pipeline: entity-driven query -> recency-windowed inverted-index search ->
artifact cleaning -> dedup -> misspelling filter -> seeded random pick.
Everything before the final pick is deterministic, so the survivor set is
independent of the seed.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path

from .hashing import Lcg64
from .kb import KnowledgeBase
from .nlu.entities import EntityMention
from .nlu.tokens import split_tokens
from .session import Candidate

DEFAULT_SEARCH_K = 100
DEFAULT_WINDOW_SECS = 7 * 24 * 3600
DEFAULT_MAX_MISSPELL_RATIO = 0.2

_URL_PREFIXES = ("http://", "https://", "www.")
_TRIPLE_LETTER_RE = re.compile(r"([a-z])\1\1")
_NON_ALPHA_RE = re.compile(r"[^a-zA-Z]+")


@dataclass
class CorpusDoc:
    text: str
    timestamp: int

    def __post_init__(self):
        if not self.text:
            raise ValueError("corpus doc text must be nonempty")


@dataclass
class Query:
    """Conjunction of groups; each group is a disjunction of phrases."""

    groups: list[list[str]]

    def __post_init__(self):
        if not self.groups or any(not g for g in self.groups):
            raise ValueError("query groups must be nonempty")


class CorpusIndex:
    """Inverted index: token -> sorted doc id list."""

    def __init__(self, docs: list[CorpusDoc]):
        self.docs = list(docs)
        self.inverted: dict[str, list[int]] = {}
        for doc_id, doc in enumerate(self.docs):
            for token in set(split_tokens(doc.text)):
                self.inverted.setdefault(token, []).append(doc_id)

    def postings(self, token: str) -> list[int]:
        return self.inverted.get(token, [])


def load_corpus(path: str | Path) -> CorpusIndex:
    docs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            docs.append(CorpusDoc(text=rec["text"], timestamp=rec["timestamp"]))
    return CorpusIndex(docs)


def load_dictionary(path: str | Path) -> frozenset[str]:
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip().lower()
            if word:
                words.add(word)
    return frozenset(words)


def build_query(mentions: list[EntityMention], kb: KnowledgeBase) -> Query | None:
    """One group per mention: the surface form plus the KB label."""
    if not mentions:
        return None
    return Query(groups=[[m.surface, kb.get(m.kb_id).label] for m in mentions])


def search(
    index: CorpusIndex,
    query: Query,
    k: int = DEFAULT_SEARCH_K,
    window: int = DEFAULT_WINDOW_SECS,
    now: int = 0,
) -> list[CorpusDoc]:
    """Newest-first matches within the recency window, truncated to ``k``.

    A doc matches when, for every group, some alternative phrase has all its
    tokens present in the doc (bag semantics, no adjacency).
    """
    candidate_ids: set[int] | None = None
    for group in query.groups:
        group_ids: set[int] = set()
        for phrase in group:
            tokens = split_tokens(phrase)
            if not tokens:
                continue
            ids = set(index.postings(tokens[0]))
            for token in tokens[1:]:
                ids &= set(index.postings(token))
                if not ids:
                    break
            group_ids |= ids
        if candidate_ids is None:
            candidate_ids = group_ids
        else:
            candidate_ids &= group_ids
        if not candidate_ids:
            return []

    cutoff = now - window
    hits = [i for i in candidate_ids if index.docs[i].timestamp >= cutoff]
    hits.sort(key=lambda i: (-index.docs[i].timestamp, i))
    return [index.docs[i] for i in hits[:k]]


def _is_artifact_token(token: str) -> bool:
    lowered = token.lower()
    if lowered.startswith(_URL_PREFIXES):
        return True
    if token.startswith("@") or token.startswith("#"):
        return True
    return not any(ch.isalnum() for ch in token)


def clean_text(text: str) -> str | None:
    """Drop URL/mention/hashtag/symbol-only tokens; None when nothing remains."""
    kept = [tok for tok in text.split() if not _is_artifact_token(tok)]
    if not kept:
        return None
    return " ".join(kept)


def misspell_ratio(text: str, dictionary: frozenset[str]) -> float:
    """Fraction of words out-of-dictionary or with a >=3 identical-letter run.

    Words are whitespace tokens reduced to their alphabetic characters;
    wordless text scores 0.
    """
    words = []
    for token in text.split():
        word = _NON_ALPHA_RE.sub("", token).lower()
        if word:
            words.append(word)
    if not words:
        return 0.0
    misspelled = sum(
        1 for w in words if w not in dictionary or _TRIPLE_LETTER_RE.search(w) is not None
    )
    return misspelled / len(words)


def _normalize_for_dedup(text: str) -> str:
    return " ".join(split_tokens(text))


def retrieval_reply(
    mentions: list[EntityMention],
    kb: KnowledgeBase,
    index: CorpusIndex,
    dictionary: frozenset[str],
    now: int,
    rng_seed: int,
    max_ratio: float = DEFAULT_MAX_MISSPELL_RATIO,
    k: int = DEFAULT_SEARCH_K,
    window: int = DEFAULT_WINDOW_SECS,
) -> Candidate | None:
    """Seeded random pick among the docs that survive the whole pipeline."""
    query = build_query(mentions, kb)
    if query is None:
        return None
    survivors = []
    seen = set()
    for doc in search(index, query, k=k, window=window, now=now):
        cleaned = clean_text(doc.text)
        if cleaned is None:
            continue
        normalized = _normalize_for_dedup(cleaned)
        if normalized in seen:
            continue
        seen.add(normalized)
        if misspell_ratio(cleaned, dictionary) > max_ratio:
            continue
        survivors.append(cleaned)
    if not survivors:
        return None
    rng = Lcg64(rng_seed)
    return Candidate.make(survivors[rng.randrange(len(survivors))], "retrieval")
