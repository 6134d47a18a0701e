"""Conversation-context services: pronoun resolution and topic smoothing.

Resolution is rule-based over the recent turn window: every third-person
pronoun in the input is replaced by the KB label of the earliest entity
mention in the window, on the observation that the first reference to an
item is usually an explicit one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .kb import KnowledgeBase
from .nlu.entities import EntityMention
from .nlu.forest import N_TOPICS, TopicDistribution
from .nlu.tokens import token_spans
from .session import Turn

WINDOW_SIZE = 5

PRONOUNS = frozenset({"it", "he", "she", "they", "him", "her", "them"})


@dataclass
class ContextWindow:
    """Up to five recent turns with their entity mentions and topic history."""

    turns: list[Turn] = field(default_factory=list)
    mentions: list[list[EntityMention]] = field(default_factory=list)
    topic_history: list[TopicDistribution] = field(default_factory=list)

    def __post_init__(self):
        if len(self.turns) > WINDOW_SIZE or len(self.topic_history) > WINDOW_SIZE:
            raise ValueError(f"window holds at most {WINDOW_SIZE} turns")
        if len(self.mentions) != len(self.turns):
            raise ValueError("mentions must align with turns")


def earliest_mention(window: ContextWindow) -> EntityMention | None:
    """First mention in the window: lowest turn index, then lowest offset."""
    for turn_mentions in window.mentions:
        if turn_mentions:
            return min(turn_mentions, key=lambda m: m.start)
    return None


def resolve_pronouns(text: str, window: ContextWindow, kb: KnowledgeBase) -> str:
    """Substitute third-person pronouns with the earliest mention's KB label.

    Whole tokens only; surrounding text keeps its original casing. The input
    comes back unchanged when it has no pronoun or the window no mention.
    """
    mention = earliest_mention(window)
    if mention is None:
        return text
    label = kb.get(mention.kb_id).label
    pieces = []
    cursor = 0
    for token, start, end in token_spans(text):
        if token in PRONOUNS:
            pieces.append(text[cursor:start])
            pieces.append(label)
            cursor = end
    pieces.append(text[cursor:])
    return "".join(pieces)


def smooth_topics(
    history: list[TopicDistribution], current: TopicDistribution
) -> TopicDistribution:
    """Componentwise mean of the recent distributions and the current one."""
    if len(history) > WINDOW_SIZE:
        raise ValueError(f"history holds at most {WINDOW_SIZE} distributions")
    everything = [*history, current]
    n = len(everything)
    return TopicDistribution(
        [sum(d.probabilities[i] for d in everything) / n for i in range(N_TOPICS)]
    )
