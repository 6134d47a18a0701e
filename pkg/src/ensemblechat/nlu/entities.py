"""Dictionary-based entity linking over the knowledge-base alias index.

A case-insensitive longest-match scan over the token stream; overlapping
matches resolve longest-then-leftmost. Confidence is the reciprocal of the
number of entities sharing the matched alias, and low-confidence mentions
are dropped at the threshold.
"""

from __future__ import annotations

from dataclasses import dataclass

from .tokens import token_spans

DEFAULT_ENTITY_THRESHOLD = 0.5


@dataclass
class EntityMention:
    surface: str
    start: int
    end: int
    kb_id: str
    confidence: float


def link_entities(text: str, kb, threshold: float = DEFAULT_ENTITY_THRESHOLD) -> list[EntityMention]:
    """Entity mentions found in ``text``, left to right, non-overlapping."""
    spans = token_spans(text)
    if not spans or not kb.alias_index:
        return []
    tokens = [s[0] for s in spans]

    # All alias matches as (token span, entity ids).
    matches: list[tuple[int, int, list[str]]] = []
    max_len = min(kb.max_alias_tokens, len(tokens))
    for start in range(len(tokens)):
        for length in range(max_len, 0, -1):
            if start + length > len(tokens):
                continue
            ids = kb.alias_index.get(tuple(tokens[start : start + length]))
            if ids:
                matches.append((start, start + length, ids))

    # Longest match wins, then leftmost.
    matches.sort(key=lambda m: (-(m[1] - m[0]), m[0]))
    taken = [False] * len(tokens)
    accepted = []
    for tok_start, tok_end, ids in matches:
        if any(taken[tok_start:tok_end]):
            continue
        for i in range(tok_start, tok_end):
            taken[i] = True
        accepted.append((tok_start, tok_end, ids))

    mentions = []
    for tok_start, tok_end, ids in sorted(accepted):
        confidence = 1.0 / len(ids)
        if confidence < threshold:
            continue
        char_start = spans[tok_start][1]
        char_end = spans[tok_end - 1][2]
        # Shared aliases are ambiguous; settle on the smallest entity id.
        mentions.append(
            EntityMention(
                surface=text[char_start:char_end],
                start=char_start,
                end=char_end,
                kb_id=ids[0],
                confidence=confidence,
            )
        )
    return mentions
