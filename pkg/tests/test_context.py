import pytest

from ensemblechat.context import ContextWindow, resolve_pronouns, smooth_topics
from ensemblechat.nlu import link_entities
from ensemblechat.nlu.forest import TopicDistribution
from ensemblechat.nlu.tokens import split_tokens
from ensemblechat.session import Turn


def france_window(kb):
    user = Turn("user", "Do you know France?", 10, 0)
    bot = Turn(
        "bot",
        "France, officially the French Republic, is a country in western Europe.",
        11,
        1,
    )
    return ContextWindow(
        turns=[user, bot],
        mentions=[link_entities(user.text, kb), link_entities(bot.text, kb)],
        topic_history=[],
    )


def test_france_example(small_kb):
    window = france_window(small_kb)
    out = resolve_pronouns("What's the capital of it?", window, small_kb)
    assert out == "What's the capital of France?"


def test_no_pronoun_unchanged(small_kb):
    window = france_window(small_kb)
    text = "Tell me about Paris please"
    assert resolve_pronouns(text, window, small_kb) == text


def test_no_mentions_unchanged(small_kb):
    window = ContextWindow(
        turns=[Turn("user", "hello there", 1, 0)], mentions=[[]], topic_history=[]
    )
    text = "what is it"
    assert resolve_pronouns(text, window, small_kb) == text


def test_earliest_turn_wins(small_kb):
    t0 = Turn("user", "Rush Hour was on tv", 1, 0)
    t1 = Turn("user", "then I read about France", 2, 1)
    window = ContextWindow(
        turns=[t0, t1],
        mentions=[link_entities(t0.text, small_kb), link_entities(t1.text, small_kb)],
        topic_history=[],
    )
    out = resolve_pronouns("do you like it", window, small_kb)
    assert out == "do you like Rush Hour"


def test_earliest_offset_wins_within_turn(small_kb):
    t0 = Turn("user", "Paris beats France for me", 1, 0)
    window = ContextWindow(
        turns=[t0], mentions=[link_entities(t0.text, small_kb)], topic_history=[]
    )
    assert resolve_pronouns("it is lovely", window, small_kb) == "Paris is lovely"


def test_whole_tokens_only_and_casing_preserved(small_kb):
    window = france_window(small_kb)
    out = resolve_pronouns("IT says Italy fits 'it' but Itself stays", window, small_kb)
    # "IT" and "it" replaced; "Italy"/"Itself" untouched; casing elsewhere kept
    assert out == "France says Italy fits 'France' but Itself stays"


def test_every_pronoun_gets_same_label(small_kb):
    window = france_window(small_kb)
    out = resolve_pronouns("he said they saw him with them", window, small_kb)
    assert out == "France said France saw France with France"


def test_non_pronoun_token_count_preserved(small_kb):
    window = france_window(small_kb)
    pronouns = {"it", "he", "she", "they", "him", "her", "them"}
    for text in ("what is it", "she likes her cat", "nothing to see here"):
        out = resolve_pronouns(text, window, small_kb)
        before = [t for t in split_tokens(text) if t not in pronouns]
        after = [t for t in split_tokens(out) if t not in pronouns and t != "france"]
        assert before == after


def test_window_size_validation(small_kb):
    turns = [Turn("user", f"t{i}", i, i) for i in range(6)]
    with pytest.raises(ValueError):
        ContextWindow(turns=turns, mentions=[[] for _ in turns], topic_history=[])
    with pytest.raises(ValueError):
        ContextWindow(turns=turns[:2], mentions=[[]], topic_history=[])


class TestSmoothTopics:
    def test_empty_history_returns_current(self):
        current = TopicDistribution([0.4, 0.1, 0.1, 0.1, 0.1, 0.2])
        assert smooth_topics([], current).probabilities == current.probabilities

    def test_identical_distributions_unchanged(self):
        d = TopicDistribution([0.3, 0.2, 0.1, 0.1, 0.1, 0.2])
        out = smooth_topics([d, d, d], d)
        assert out.probabilities == pytest.approx(d.probabilities)

    def test_hand_mean(self):
        a = TopicDistribution([1, 0, 0, 0, 0, 0])
        b = TopicDistribution([0, 1, 0, 0, 0, 0])
        out = smooth_topics([a], b)
        assert out.probabilities == pytest.approx([0.5, 0.5, 0, 0, 0, 0])

    def test_sum_and_bounds(self):
        import itertools

        dists = [
            TopicDistribution([0.5, 0.1, 0.1, 0.1, 0.1, 0.1]),
            TopicDistribution([0.0, 0.6, 0.1, 0.1, 0.1, 0.1]),
            TopicDistribution([0.2, 0.2, 0.2, 0.2, 0.1, 0.1]),
        ]
        for history in itertools.permutations(dists, 2):
            out = smooth_topics(list(history), dists[2])
            assert abs(sum(out.probabilities) - 1.0) <= 1e-9
            for i, p in enumerate(out.probabilities):
                values = [d.probabilities[i] for d in (*history, dists[2])]
                assert min(values) - 1e-12 <= p <= max(values) + 1e-12

    def test_history_cap(self):
        d = TopicDistribution.uniform()
        with pytest.raises(ValueError):
            smooth_topics([d] * 6, d)
