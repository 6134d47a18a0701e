import pytest

from ensemblechat.kb import EntityRecord, EntityRef, Fact, KnowledgeBase, RelationTemplate


@pytest.fixture
def small_kb() -> KnowledgeBase:
    return KnowledgeBase(
        [
            EntityRecord(
                id="film_rush_hour",
                label="Rush Hour",
                type="film",
                aliases=["Rush Hour"],
                attributes={"cast member": EntityRef("person_jackie_chan")},
            ),
            EntityRecord(
                id="person_jackie_chan",
                label="Jackie Chan",
                type="person",
                aliases=["Jackie Chan"],
            ),
            EntityRecord(
                id="person_neil_gorsuch",
                label="Neil Gorsuch",
                type="person",
                aliases=["Neil Gorsuch", "Gorsuch"],
            ),
            EntityRecord(
                id="concept_advice_consent",
                label="Advice and consent",
                type="concept",
                aliases=["Advice and consent", "confirmation"],
            ),
            EntityRecord(
                id="country_france",
                label="France",
                type="country",
                aliases=["France"],
                attributes={"capital": EntityRef("city_paris")},
            ),
            EntityRecord(id="city_paris", label="Paris", type="city", aliases=["Paris"]),
        ]
    )


@pytest.fixture
def film_template() -> RelationTemplate:
    return RelationTemplate(
        master_type="film",
        feature_type="cast member",
        text=(
            "Last night I had a dream that I was [cast member]... So... "
            "I think I need to take a break from watching [film]"
        ),
    )


@pytest.fixture
def france_fact() -> Fact:
    return Fact(subject="country_france", relation="capital", answer="Paris")
