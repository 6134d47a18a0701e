"""The end-to-end reply pipeline.

For each user input: resolve pronouns against the recent window, run NLU
(intent, entities, topics), then walk the strategy tiers in priority order.
The first rule-based generator whose reply survives the content filter is
adopted; otherwise knowledge-based QA gets a shot; otherwise the retrieval
and neural candidates are filtered and reranked by engagement margin. A
configured fallback line guarantees the bot is never silent.

Wall-clock and latency sources are injectable so tests can pin timestamps
and make traces reproducible byte for byte.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable

from .analytics import DEFAULT_MARKER_WORDS, StatsTable, compute_stats
from .config import PipelineConfig
from .context import WINDOW_SIZE, ContextWindow, resolve_pronouns, smooth_topics
from .hashing import derive_seed
from .kb import load_facts, load_kb, load_templates
from .nlu.entities import EntityMention, link_entities
from .nlu.forest import TOPICS, TopicDistribution, classify_topic, load_topic_model
from .nlu.intents import load_intents, match_intent
from .nlu.tokens import load_stopwords
from .ranking import FilterPolicy, content_filter, load_blocklist, load_svm, select_reply
from .retrieval import load_corpus, load_dictionary, retrieval_reply
from .seq2seq import load_model, neural_reply
from .session import Candidate, Session, SessionStore, Trace, TracedCandidate, Turn
from .strategies import (
    backstory_reply,
    entity_template_fills,
    entity_template_reply,
    intent_reply,
    load_backstory,
    matching_fact,
    qa_answer,
)


@dataclass
class _SessionContext:
    """Per-session NLU state kept alongside the transcript."""

    mentions_by_turn: dict[int, list[EntityMention]] = field(default_factory=dict)
    topic_history: list[TopicDistribution] = field(default_factory=list)


class Pipeline:
    def __init__(
        self,
        config: PipelineConfig,
        clock: Callable[[], int] | None = None,
        perf: Callable[[], float] | None = None,
    ):
        config.validate()
        self.config = config
        self.clock = clock or (lambda: int(time.time()))
        self.perf = perf or time.perf_counter

        self.stopwords = load_stopwords(config.stopwords)
        self.intents = load_intents(config.intents)
        self.intents_by_id = {intent.id: intent for intent in self.intents}
        self.backstory = load_backstory(config.backstory)
        self.kb = load_kb(config.kb)
        self.templates = load_templates(config.templates)
        self.facts = load_facts(config.facts, self.kb)
        self.corpus = load_corpus(config.corpus)
        self.dictionary = load_dictionary(config.dictionary)
        self.filter_policy = FilterPolicy(blocklist=load_blocklist(config.blocklist))
        self.topic_model = load_topic_model(config.topic_model)
        self.engagement_model = load_svm(config.engagement_model)
        self.neural_models = self._load_neural_models()

        self.store = SessionStore(config.store_dir, seed=config.seed)
        self._contexts: dict[str, _SessionContext] = {}

    def _load_neural_models(self):
        by_name = {t.lower(): t for t in TOPICS}
        models = {}
        for path in sorted(self.config.seq2seq_models.glob("seq2seq_*.json")):
            name = path.stem.removeprefix("seq2seq_").lower()
            topic = by_name.get(name)
            if topic is not None:
                models[topic] = load_model(path)
        if "General" not in models:
            raise FileNotFoundError(
                f"no seq2seq_general.json under {self.config.seq2seq_models}"
            )
        return models

    # ------------------------------------------------------------- session

    def create_session(self) -> Session:
        session = self.store.create_session(self.clock())
        self._contexts[session.id] = _SessionContext()
        return session

    def rate(self, session_id: str, rating: int) -> None:
        self.store.record_rating(self.store.get(session_id), rating)

    def transcript(self, session_id: str) -> Session:
        return self.store.get(session_id)

    def analytics(self, marker_words=DEFAULT_MARKER_WORDS) -> StatsTable:
        return compute_stats(
            self.store.load_all_sessions(), self.store.load_traces(), marker_words
        )

    def _context_for(self, session_id: str) -> _SessionContext:
        ctx = self._contexts.get(session_id)
        if ctx is None:
            ctx = self._contexts[session_id] = _SessionContext()
        return ctx

    def _window(self, turns: list[Turn], ctx: _SessionContext) -> ContextWindow:
        recent = turns[-WINDOW_SIZE:]
        return ContextWindow(
            turns=recent,
            mentions=[ctx.mentions_by_turn.get(t.turn_index, []) for t in recent],
            topic_history=ctx.topic_history[-WINDOW_SIZE:],
        )

    # ------------------------------------------------------------- respond

    def respond(self, session_id: str, user_text: str, now: int | None = None) -> tuple[str, Trace]:
        """One full exchange; appends the user and bot turns and logs a trace."""
        session = self.store.get(session_id)
        if not user_text:
            raise ValueError("user text must be nonempty")
        with self.store.lock_for(session_id):
            return self._respond_locked(session, user_text, now)

    def _respond_locked(self, session: Session, user_text: str, now: int | None) -> tuple[str, Trace]:
        if now is None:
            now = self.clock()
        config = self.config
        ctx = self._context_for(session.id)
        trace = Trace()
        prior_turns = self.store.snapshot_turns(session)
        user_turn = self.store.append_turn(session, "user", user_text, now)
        call_seed = derive_seed(config.seed, f"call:{session.id}:{user_turn.turn_index}")

        # -- context resolution
        t0 = self.perf()
        window = self._window(prior_turns, ctx)
        resolved = resolve_pronouns(user_text, window, self.kb)
        trace.latency_ms["resolve"] = self._ms_since(t0)
        trace.resolved_input = resolved

        # -- NLU
        t0 = self.perf()
        intent_match = match_intent(
            resolved, self.intents, config.intent_threshold, self.stopwords
        )
        mentions = link_entities(resolved, self.kb, config.entity_threshold)
        prior_dist = ctx.topic_history[-1] if ctx.topic_history else None
        current_dist = classify_topic(self.topic_model, resolved, prior_dist, self.stopwords)
        smoothed = smooth_topics(ctx.topic_history[-WINDOW_SIZE:], current_dist)
        ctx.topic_history.append(current_dist)
        ctx.mentions_by_turn[user_turn.turn_index] = mentions
        trace.latency_ms["nlu"] = self._ms_since(t0)
        trace.topic_distribution = list(smoothed.probabilities)

        chosen = self._run_tiers(trace, resolved, intent_match, mentions, call_seed, now)

        reply_text = chosen.text if chosen is not None else config.fallback_line
        trace.chosen_generator = chosen.generator if chosen is not None else None

        bot_turn = self.store.append_turn(session, "bot", reply_text, self.clock())
        ctx.mentions_by_turn[bot_turn.turn_index] = link_entities(
            reply_text, self.kb, config.entity_threshold
        )
        self.store.log_trace(session.id, trace)
        return reply_text, trace

    def _run_tiers(self, trace, resolved, intent_match, mentions, call_seed, now) -> Candidate | None:
        config = self.config

        # -- tier 1: first rule whose reply survives the filter is adopted
        if intent_match is not None:
            trace.matched_template_ids.append(f"intent:{intent_match.intent_id}")
            t0 = self.perf()
            candidate = intent_reply(
                intent_match,
                self.intents_by_id[intent_match.intent_id],
                derive_seed(call_seed, "intent"),
            )
            trace.latency_ms["intent"] = self._ms_since(t0)
            if self._admit(trace, candidate):
                return candidate

        t0 = self.perf()
        candidate = backstory_reply(
            resolved,
            self.backstory,
            config.backstory_threshold,
            derive_seed(call_seed, "backstory"),
            self.stopwords,
        )
        trace.latency_ms["backstory"] = self._ms_since(t0)
        if candidate is not None:
            trace.matched_template_ids.append("backstory")
            if self._admit(trace, candidate):
                return candidate

        t0 = self.perf()
        fills = entity_template_fills(mentions, self.kb, self.templates)
        candidate = entity_template_reply(
            mentions, self.kb, self.templates, derive_seed(call_seed, "enttpl")
        )
        trace.latency_ms["entity_template"] = self._ms_since(t0)
        for template_id, _ in fills:
            if template_id not in trace.matched_template_ids:
                trace.matched_template_ids.append(template_id)
        if candidate is not None and self._admit(trace, candidate):
            return candidate

        # -- tier 2: knowledge-base QA
        t0 = self.perf()
        fact = matching_fact(resolved, self.kb, self.facts, config.entity_threshold)
        candidate = qa_answer(resolved, self.kb, self.facts, config.entity_threshold)
        trace.latency_ms["qa"] = self._ms_since(t0)
        if fact is not None:
            trace.matched_template_ids.append(f"fact:{fact.subject}:{fact.relation}")
        if candidate is not None and self._admit(trace, candidate):
            return candidate

        # -- tier 3: retrieval + neural ensemble
        tier3: list[Candidate] = []
        t0 = self.perf()
        retrieved = retrieval_reply(
            mentions,
            self.kb,
            self.corpus,
            self.dictionary,
            now,
            derive_seed(call_seed, "retrieval"),
            max_ratio=config.max_misspell_ratio,
            k=config.retrieval_k,
            window=config.retrieval_window_secs,
        )
        trace.latency_ms["retrieval"] = self._ms_since(t0)
        if retrieved is not None:
            tier3.append(retrieved)

        t0 = self.perf()
        smoothed = TopicDistribution(list(trace.topic_distribution))
        tier3.extend(
            neural_reply(self.neural_models, smoothed, resolved, derive_seed(call_seed, "neural"))
        )
        trace.latency_ms["neural"] = self._ms_since(t0)

        t0 = self.perf()
        survivors = content_filter(tier3, self.filter_policy)
        survivor_set = {id(c) for c in survivors}
        for cand in tier3:
            trace.candidates.append(TracedCandidate(cand, filtered=id(cand) not in survivor_set))
        chosen = select_reply(survivors, self.engagement_model)
        trace.latency_ms["select"] = self._ms_since(t0)
        return chosen

    def _admit(self, trace: Trace, candidate: Candidate) -> bool:
        """Record the candidate in the trace; True when it survives the filter."""
        survives = bool(content_filter([candidate], self.filter_policy))
        trace.candidates.append(TracedCandidate(candidate, filtered=not survives))
        return survives

    def _ms_since(self, t0: float) -> float:
        return max(0.0, (self.perf() - t0) * 1000.0)
