"""Deterministic synthetic corpora for desk-scale training and evaluation.

These generators stand in for the large crawled datasets the full-scale
system trains on; they are seeded and reproducible so tests can pin exact
expectations.
"""

from __future__ import annotations

import math

from .hashing import Lcg64, derive_seed
from .nlu.forest import TOPICS
from .ranking import EngagementExample

TOPIC_VOCAB_SIZE = 20
TOPIC_DOC_WORDS = 8


def topic_vocabulary(topic: str) -> list[str]:
    """Disjoint per-topic vocabulary of made-up words."""
    return [f"{topic.lower()}w{i:02d}" for i in range(TOPIC_VOCAB_SIZE)]


def synthetic_topic_corpus(
    docs_per_class: int, seed: int
) -> list[tuple[str, str]]:
    """Labeled docs, each drawn from its class's disjoint vocabulary."""
    rng = Lcg64(derive_seed(seed, "topic-corpus"))
    corpus = []
    for topic in TOPICS:
        vocab = topic_vocabulary(topic)
        for _ in range(docs_per_class):
            words = [vocab[rng.randrange(len(vocab))] for _ in range(TOPIC_DOC_WORDS)]
            corpus.append((" ".join(words), topic))
    return corpus


ENGAGING_WORDS = (
    "amazing brilliant fascinating hilarious insightful wonderful clever delightful "
    "superb inspiring gripping vivid witty profound dazzling remarkable charming "
    "electrifying splendid magnetic"
).split()

DULL_WORDS = (
    "meh whatever boring fine usual nothing dunno blah same plain stale flat dull "
    "tired gray bland drab beige mundane forgettable"
).split()

NEUTRAL_WORDS = (
    "post comment thread reply topic story point today people thing time part side "
    "note question idea case word line"
).split()

COMMENT_WORDS = 8
WORD_SIGNAL_P = 0.60
BAND_QUANTILES = (0.35, 0.65)


def synthetic_engagement_corpus(
    n: int, seed: int
) -> tuple[list[EngagementExample], list[int]]:
    """Examples whose label thresholds the external features, with word-choice noise.

    Outside the middle band of the external score the label is a linear
    threshold on log-upvotes and log-elapsed time, so external features
    alone classify those cases; inside the band it flips on upvote parity,
    invisible to the log features but still reflected by the comment's word
    choice. Full mode therefore beats external-only, which beats
    lexical-only.
    """
    rng = Lcg64(derive_seed(seed, "engagement-corpus"))
    raw = []
    for _ in range(n):
        elapsed = int(math.exp(rng.uniform(math.log(60.0), math.log(7 * 24 * 3600.0))))
        upvotes = int(math.exp(rng.uniform(0.0, math.log(20000.0))))
        raw.append((elapsed, upvotes))
    scores = [math.log1p(u) - 1.2 * math.log1p(e) for e, u in raw]
    ordered = sorted(scores)
    lo = ordered[int(BAND_QUANTILES[0] * n)]
    hi = ordered[int(BAND_QUANTILES[1] * n)]

    examples = []
    labels = []
    for (elapsed, upvotes), ext_score in zip(raw, scores):
        if ext_score > hi:
            label = 1
        elif ext_score <= lo:
            label = 0
        else:
            label = upvotes % 2
        own = ENGAGING_WORDS if label == 1 else DULL_WORDS
        other = DULL_WORDS if label == 1 else ENGAGING_WORDS
        words = []
        for _ in range(COMMENT_WORDS):
            pool = own if rng.float01() < WORD_SIGNAL_P else other
            words.append(pool[rng.randrange(len(pool))])
        post = " ".join(NEUTRAL_WORDS[rng.randrange(len(NEUTRAL_WORDS))] for _ in range(5))
        examples.append(
            EngagementExample(
                comment_text=" ".join(words),
                comment_score=300 if label == 1 else 0,
                post_text=post,
                post_upvotes=upvotes,
                elapsed_secs=elapsed,
            )
        )
        labels.append(label)
    return examples, labels


#: small alphabet keeps the copy task learnable at desk scale.
ECHO_ALPHABET = "abcdefgh"


def echo_pairs(n: int, seed: int) -> list[tuple[str, str]]:
    """n short random strings paired with themselves."""
    rng = Lcg64(derive_seed(seed, "echo-pairs"))
    pairs = []
    for _ in range(n):
        length = 3 + rng.randrange(4)
        word = "".join(ECHO_ALPHABET[rng.randrange(len(ECHO_ALPHABET))] for _ in range(length))
        pairs.append((word, word))
    return pairs
