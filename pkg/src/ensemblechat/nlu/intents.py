"""Similarity-based intent matching against example utterances.

An input matches an intent when the Jaccard similarity between its token
set and any of the intent's example utterances reaches the threshold.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .tokens import jaccard, tokenize

DEFAULT_INTENT_THRESHOLD = 0.6


@dataclass
class IntentDef:
    id: str
    examples: list[str]
    description: str
    strategy: str
    templates: list[str]
    followup_question: str

    def __post_init__(self):
        if not self.examples:
            raise ValueError(f"intent {self.id!r} has no examples")
        if not self.templates:
            raise ValueError(f"intent {self.id!r} has no templates")
        if self.strategy != "template":
            raise ValueError(f"intent {self.id!r}: unknown strategy {self.strategy!r}")


@dataclass
class IntentMatch:
    intent_id: str
    score: float


def load_intents(path: str | Path) -> list[IntentDef]:
    intents = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            intents.append(
                IntentDef(
                    id=rec["id"],
                    examples=list(rec["examples"]),
                    description=rec.get("description", ""),
                    strategy=rec.get("strategy", "template"),
                    templates=list(rec["templates"]),
                    followup_question=rec["followup_question"],
                )
            )
    return intents


def match_intent(
    text: str,
    intents: list[IntentDef],
    threshold: float = DEFAULT_INTENT_THRESHOLD,
    stopwords: frozenset[str] | None = None,
) -> IntentMatch | None:
    """Best-scoring intent at or above ``threshold``, or None.

    Score is the max Jaccard similarity between the input token set and any
    example's token set. Ties go to the lexicographically smallest intent id.
    """
    input_tokens = set(tokenize(text, stopwords))
    best: IntentMatch | None = None
    for intent in sorted(intents, key=lambda it: it.id):
        score = max(
            (jaccard(input_tokens, set(tokenize(ex, stopwords))) for ex in intent.examples),
            default=0.0,
        )
        if score >= threshold and (best is None or score > best.score):
            best = IntentMatch(intent_id=intent.id, score=score)
    return best
