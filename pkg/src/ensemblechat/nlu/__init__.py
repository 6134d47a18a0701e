"""Natural language understanding: tokens, intents, topics, entities."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def data_path(name: str) -> Path:
    """Path to a packaged data file (``ensemblechat/data/<name>``)."""
    return Path(str(resources.files("ensemblechat").joinpath("data", name)))


from .tokens import (  # noqa: E402
    FeatureVector,
    hash_features,
    jaccard,
    load_stopwords,
    split_tokens,
    token_spans,
    tokenize,
)
from .intents import IntentDef, IntentMatch, load_intents, match_intent  # noqa: E402
from .entities import EntityMention, link_entities  # noqa: E402
from .forest import (  # noqa: E402
    TOPICS,
    ForestConfig,
    TopicDistribution,
    TopicModel,
    classify_topic,
    load_topic_model,
    save_topic_model,
    train_topic_forest,
)

__all__ = [
    "FeatureVector",
    "hash_features",
    "jaccard",
    "load_stopwords",
    "split_tokens",
    "token_spans",
    "tokenize",
    "IntentDef",
    "IntentMatch",
    "load_intents",
    "match_intent",
    "EntityMention",
    "link_entities",
    "TOPICS",
    "ForestConfig",
    "TopicDistribution",
    "TopicModel",
    "classify_topic",
    "load_topic_model",
    "save_topic_model",
    "train_topic_forest",
    "data_path",
]
