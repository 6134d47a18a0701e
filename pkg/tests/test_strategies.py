import re

import pytest

from ensemblechat.kb import EntityRecord, EntityRef, Fact, KnowledgeBase, RelationTemplate
from ensemblechat.nlu import link_entities
from ensemblechat.nlu.intents import IntentDef, IntentMatch
from ensemblechat.strategies import (
    BackstoryEntry,
    backstory_reply,
    entity_template_reply,
    intent_reply,
    is_question,
    matching_fact,
    qa_answer,
)

MASK64 = 2**64 - 1


def reference_lcg_pick(seed: int, n: int) -> int:
    """Independent reimplementation of the documented PRNG's first pick."""
    state = (seed * 6364136223846793005 + 1442695040888963407) & MASK64
    return ((state >> 32) * n) >> 32


def make_intent(templates, followup="What about you?"):
    return IntentDef(
        id="food",
        examples=["pizza"],
        description="",
        strategy="template",
        templates=templates,
        followup_question=followup,
    )


class TestIntentReply:
    def test_single_template_appends_followup(self):
        intent = make_intent(["I like pizza."])
        cand = intent_reply(IntentMatch("food", 1.0), intent, rng_seed=5)
        assert cand.text == "I like pizza. What about you?"
        assert (cand.generator, cand.priority_tier, cand.rule_rank) == ("intent", 1, 1)

    def test_fixed_seed_deterministic(self):
        intent = make_intent(["a.", "b.", "c."])
        picks = {intent_reply(IntentMatch("food", 1.0), intent, rng_seed=42).text for _ in range(5)}
        assert len(picks) == 1

    def test_choice_matches_reference_prng(self):
        templates = ["alpha.", "beta.", "gamma."]
        intent = make_intent(templates)
        for seed in (0, 1, 7, 123456789):
            expected = templates[reference_lcg_pick(seed, 3)]
            cand = intent_reply(IntentMatch("food", 1.0), intent, rng_seed=seed)
            assert cand.text == f"{expected} What about you?"

    def test_always_ends_with_followup(self):
        intent = make_intent(["x.", "y."], followup="Right?")
        for seed in range(10):
            assert intent_reply(IntentMatch("food", 1.0), intent, seed).text.endswith("Right?")

    def test_mismatched_intent_rejected(self):
        with pytest.raises(ValueError):
            intent_reply(IntentMatch("other", 1.0), make_intent(["t."]), 0)


class TestBackstoryReply:
    DB = [
        BackstoryEntry(["how old are you", "your age"], ["I'm nine years old!"]),
        BackstoryEntry(["favorite color"], ["Turquoise."]),
    ]

    def test_age_question_yields_persona_age(self):
        cand = backstory_reply("how old are you", self.DB, rng_seed=1)
        assert cand is not None
        assert "nine" in cand.text
        assert (cand.generator, cand.priority_tier, cand.rule_rank) == ("backstory", 1, 2)

    def test_half_overlap_below_threshold(self):
        # tokens {old, friend} vs pattern {old}: 1/2 = 0.5 < 0.7
        db = [BackstoryEntry(["old"], ["reply"])]
        assert backstory_reply("old friend", db) is None

    def test_empty_input_no_reply(self):
        assert backstory_reply("", self.DB) is None

    def test_no_fallback_leakage_below_threshold(self):
        for text in ("tell me about trains", "what network do you use", "blorp"):
            assert backstory_reply(text, self.DB) is None

    def test_threshold_inclusive(self):
        db = [BackstoryEntry(["green eggs"], ["sure"])]
        assert backstory_reply("green eggs", db, threshold=1.0) is not None


class TestEntityTemplateReply:
    def test_paper_worked_example(self, small_kb, film_template):
        text = "I think Rush Hour is the best action movie I've ever seen"
        mentions = link_entities(text, small_kb)
        cand = entity_template_reply(mentions, small_kb, [film_template], rng_seed=3)
        assert cand is not None
        assert cand.text == (
            "Last night I had a dream that I was Jackie Chan... So... "
            "I think I need to take a break from watching Rush Hour"
        )
        assert (cand.generator, cand.priority_tier, cand.rule_rank) == ("entity_template", 1, 3)

    def test_no_mentions_none(self, small_kb, film_template):
        assert entity_template_reply([], small_kb, [film_template], 0) is None

    def test_no_applicable_template_none(self, small_kb):
        mentions = link_entities("Jackie Chan is amazing", small_kb)
        template = RelationTemplate("city", "country", "[city] lies in [country].")
        assert entity_template_reply(mentions, small_kb, [template], 0) is None

    def test_literal_attribute_fill(self):
        kb = KnowledgeBase(
            [
                EntityRecord(
                    id="food_pizza",
                    label="Pizza",
                    type="food",
                    aliases=["pizza"],
                    attributes={"origin": "Italy"},
                )
            ]
        )
        template = RelationTemplate("food", "origin", "[food] comes from [origin].")
        mentions = link_entities("I want pizza", kb)
        cand = entity_template_reply(mentions, kb, [template], 1)
        assert cand.text == "Pizza comes from Italy."

    def test_filled_text_has_no_residual_slots(self, small_kb, film_template):
        templates = [
            film_template,
            RelationTemplate("country", "capital", "The capital of [country] is [capital]."),
        ]
        text = "Rush Hour and France in one sentence"
        mentions = link_entities(text, small_kb)
        for seed in range(8):
            cand = entity_template_reply(mentions, small_kb, templates, seed)
            assert cand is not None
            assert not re.search(r"\[[^\]]+\]", cand.text)

    def test_template_slot_validation(self):
        with pytest.raises(ValueError):
            RelationTemplate("film", "cast member", "no slots at all")


class TestQaAnswer:
    def test_capital_of_france(self, small_kb, france_fact):
        cand = qa_answer("What's the capital of France?", small_kb, [france_fact])
        assert cand is not None
        assert cand.text == "Paris."
        assert (cand.generator, cand.priority_tier) == ("qa", 2)

    def test_declarative_is_not_a_question(self, small_kb, france_fact):
        assert qa_answer("I live in France", small_kb, [france_fact]) is None

    def test_question_without_matching_fact(self, small_kb, france_fact):
        assert qa_answer("Why is the sky blue?", small_kb, [france_fact]) is None

    def test_relation_tokens_must_all_appear(self, small_kb):
        fact = Fact(subject="country_france", relation="national anthem", answer="La Marseillaise")
        assert qa_answer("What is the anthem of France?", small_kb, [fact]) is None
        assert qa_answer("What is the national anthem of France?", small_kb, [fact]) is not None

    def test_first_fact_in_file_order_wins(self, small_kb):
        facts = [
            Fact(subject="country_france", relation="capital", answer="First"),
            Fact(subject="country_france", relation="capital", answer="Second"),
        ]
        assert qa_answer("capital of France?", small_kb, facts).text == "First."

    def test_matching_fact_exposed_for_tracing(self, small_kb, france_fact):
        assert matching_fact("What's the capital of France?", small_kb, [france_fact]) is france_fact


class TestQuestionDetection:
    @pytest.mark.parametrize(
        "text",
        [
            "What's the capital of France?",
            "capital of France?",
            "who won",
            "did it rain",
            "Can you swim",
            "HOW does this work",
        ],
    )
    def test_questions(self, text):
        assert is_question(text)

    @pytest.mark.parametrize("text", ["I live in France", "tell me a story", ""])
    def test_non_questions(self, text):
        assert not is_question(text)


def test_all_strategies_deterministic_for_fixed_seed(small_kb, film_template, france_fact):
    intent = make_intent(["a.", "b.", "c."])
    db = [BackstoryEntry(["how old are you"], ["nine!", "NINE."])]
    mentions = link_entities("Rush Hour was great", small_kb)
    for seed in (0, 99):
        r1 = (
            intent_reply(IntentMatch("food", 1.0), intent, seed).text,
            backstory_reply("how old are you", db, rng_seed=seed).text,
            entity_template_reply(mentions, small_kb, [film_template], seed).text,
            qa_answer("capital of France?", small_kb, [france_fact]).text,
        )
        r2 = (
            intent_reply(IntentMatch("food", 1.0), intent, seed).text,
            backstory_reply("how old are you", db, rng_seed=seed).text,
            entity_template_reply(mentions, small_kb, [film_template], seed).text,
            qa_answer("capital of France?", small_kb, [france_fact]).text,
        )
        assert r1 == r2
