import pytest

from ensemblechat.kb import EntityRecord, EntityRef, KnowledgeBase
from ensemblechat.nlu import link_entities


def test_rush_hour_single_confident_mention(small_kb):
    text = "I think Rush Hour is the best action movie I've ever seen"
    mentions = link_entities(text, small_kb)
    assert len(mentions) == 1
    m = mentions[0]
    assert (m.surface, m.kb_id, m.confidence) == ("Rush Hour", "film_rush_hour", 1.0)
    assert text[m.start:m.end] == "Rush Hour"


def test_no_alias_no_mentions(small_kb):
    assert link_entities("nothing relevant here", small_kb) == []
    assert link_entities("", small_kb) == []


def test_shared_alias_confidence_drops():
    kb = KnowledgeBase(
        [
            EntityRecord(id=f"e{i}", label=f"Thing {i}", type="thing", aliases=["widget"])
            for i in range(3)
        ]
    )
    # 1/3 < 0.5 threshold: dropped
    assert link_entities("I saw a widget", kb) == []
    # visible at a looser threshold, smallest id wins
    loose = link_entities("I saw a widget", kb, threshold=0.3)
    assert len(loose) == 1
    assert loose[0].kb_id == "e0"
    assert loose[0].confidence == pytest.approx(1 / 3)


def test_two_way_shared_alias_kept_at_default_threshold():
    kb = KnowledgeBase(
        [
            EntityRecord(id="a", label="A", type="t", aliases=["twin"]),
            EntityRecord(id="b", label="B", type="t", aliases=["twin"]),
        ]
    )
    mentions = link_entities("the twin appeared", kb)
    assert len(mentions) == 1
    assert mentions[0].confidence == 0.5  # 1/2, not < 0.5


def test_longest_match_wins(small_kb):
    mentions = link_entities("How did Neil Gorsuch do in his confirmation hearings?", small_kb)
    assert [(m.surface, m.kb_id) for m in mentions] == [
        ("Neil Gorsuch", "person_neil_gorsuch"),
        ("confirmation", "concept_advice_consent"),
    ]


def test_overlap_resolution_longest_then_leftmost():
    kb = KnowledgeBase(
        [
            EntityRecord(id="long", label="red blue green", type="t", aliases=["red blue green"]),
            EntityRecord(id="short", label="blue", type="t", aliases=["blue"]),
        ]
    )
    mentions = link_entities("red blue green", kb)
    assert [m.kb_id for m in mentions] == ["long"]


def test_mentions_never_overlap(small_kb):
    texts = [
        "Rush Hour Rush Hour Rush Hour",
        "Gorsuch Neil Gorsuch confirmation France Paris",
        "France France France",
    ]
    for text in texts:
        mentions = link_entities(text, small_kb)
        spans = sorted((m.start, m.end) for m in mentions)
        for (s1, e1), (s2, e2) in zip(spans, spans[1:]):
            assert e1 <= s2
        for m in mentions:
            assert m.end > m.start
            assert m.kb_id in small_kb.entities


def test_case_insensitive(small_kb):
    mentions = link_entities("RUSH HOUR was on tv", small_kb)
    assert len(mentions) == 1
    assert mentions[0].surface == "RUSH HOUR"


def test_kb_validates_dangling_reference():
    with pytest.raises(ValueError):
        KnowledgeBase(
            [
                EntityRecord(
                    id="x",
                    label="X",
                    type="t",
                    aliases=["x"],
                    attributes={"friend": EntityRef("missing")},
                )
            ]
        )


def test_kb_label_always_an_alias():
    record = EntityRecord(id="x", label="The X", type="t", aliases=["ex"])
    assert "The X" in record.aliases
