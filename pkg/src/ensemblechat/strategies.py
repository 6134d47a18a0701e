"""Tier-1 and tier-2 reply generators.

Tier 1 (rule-based, in priority order): intent templates, backstory persona,
entity templates. Tier 2 (knowledge-based): fact-store question answering.
All template/reply choice is uniform over the applicable options via the
seeded LCG, so a fixed seed gives a fixed reply.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .hashing import Lcg64
from .kb import Fact, KnowledgeBase, RelationTemplate
from .nlu.entities import EntityMention, link_entities
from .nlu.intents import IntentDef, IntentMatch
from .nlu.tokens import jaccard, split_tokens, tokenize
from .session import Candidate

DEFAULT_BACKSTORY_THRESHOLD = 0.7

#: first-token cues that mark an input as a question (besides a trailing "?").
QUESTION_STARTERS = frozenset(
    "who what when where why how is are do does did can could would will".split()
)


@dataclass
class BackstoryEntry:
    pattern_examples: list[str]
    replies: list[str]

    def __post_init__(self):
        if not self.pattern_examples or not self.replies:
            raise ValueError("backstory entry needs patterns and replies")


def load_backstory(path: str | Path) -> list[BackstoryEntry]:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            entries.append(
                BackstoryEntry(
                    pattern_examples=list(rec["pattern_examples"]),
                    replies=list(rec["replies"]),
                )
            )
    return entries


def intent_reply(match: IntentMatch, intent: IntentDef, rng_seed: int) -> Candidate:
    """Random template for the matched intent with its follow-up question appended."""
    if match.intent_id != intent.id:
        raise ValueError(f"match {match.intent_id!r} does not belong to intent {intent.id!r}")
    rng = Lcg64(rng_seed)
    template = intent.templates[rng.randrange(len(intent.templates))]
    return Candidate.make(f"{template} {intent.followup_question}", "intent")


def backstory_reply(
    text: str,
    db: list[BackstoryEntry],
    threshold: float = DEFAULT_BACKSTORY_THRESHOLD,
    rng_seed: int = 0,
    stopwords: frozenset[str] | None = None,
) -> Candidate | None:
    """Persona reply when the input is close enough to a backstory pattern."""
    input_tokens = set(tokenize(text, stopwords))
    best_entry: BackstoryEntry | None = None
    best_score = 0.0
    for entry in db:
        score = max(
            jaccard(input_tokens, set(tokenize(p, stopwords))) for p in entry.pattern_examples
        )
        if score > best_score:
            best_score = score
            best_entry = entry
    if best_entry is None or best_score < threshold:
        return None
    rng = Lcg64(rng_seed)
    reply = best_entry.replies[rng.randrange(len(best_entry.replies))]
    return Candidate.make(reply, "backstory")


def fill_template(template: RelationTemplate, master_label: str, feature_label: str) -> str:
    text = template.text.replace(f"[{template.master_type}]", master_label)
    return text.replace(f"[{template.feature_type}]", feature_label)


def entity_template_fills(
    mentions: list[EntityMention],
    kb: KnowledgeBase,
    templates: list[RelationTemplate],
) -> list[tuple[str, str]]:
    """All (template id, filled text) pairs applicable to the mentions, in
    deterministic order: mention order, then record attribute order, then
    template file order."""
    fills = []
    for mention in mentions:
        record = kb.get(mention.kb_id)
        for feature, value in record.attributes.items():
            for template in templates:
                if template.master_type == record.type and template.feature_type == feature:
                    text = fill_template(template, record.label, kb.value_label(value))
                    fills.append((f"enttpl:{record.type}:{feature}", text))
    return fills


def entity_template_reply(
    mentions: list[EntityMention],
    kb: KnowledgeBase,
    templates: list[RelationTemplate],
    rng_seed: int,
) -> Candidate | None:
    """Uniformly random choice among every applicable filled template."""
    fills = entity_template_fills(mentions, kb, templates)
    if not fills:
        return None
    rng = Lcg64(rng_seed)
    _, text = fills[rng.randrange(len(fills))]
    return Candidate.make(text, "entity_template")


def is_question(text: str) -> bool:
    if text.rstrip().endswith("?"):
        return True
    tokens = split_tokens(text)
    return bool(tokens) and tokens[0] in QUESTION_STARTERS


def matching_fact(
    text: str,
    kb: KnowledgeBase,
    facts: list[Fact],
    entity_threshold: float = 0.5,
) -> Fact | None:
    """First fact applicable to a question-shaped input, in file order.

    A fact applies when its subject is an entity linked in the text and
    every token of its relation string occurs in the text.
    """
    if not is_question(text):
        return None
    mentions = link_entities(text, kb, threshold=entity_threshold)
    if not mentions:
        return None
    linked = {m.kb_id for m in mentions}
    text_tokens = set(split_tokens(text))
    for fact in facts:
        if fact.subject not in linked:
            continue
        relation_tokens = split_tokens(fact.relation)
        if relation_tokens and all(t in text_tokens for t in relation_tokens):
            return fact
    return None


def qa_answer(
    text: str,
    kb: KnowledgeBase,
    facts: list[Fact],
    entity_threshold: float = 0.5,
) -> Candidate | None:
    """Fact-store answer for question-shaped inputs; None when no fact fits.

    Declining to answer beats answering with filler.
    """
    fact = matching_fact(text, kb, facts, entity_threshold)
    if fact is None:
        return None
    return Candidate.make(f"{fact.answer}.", "qa")
