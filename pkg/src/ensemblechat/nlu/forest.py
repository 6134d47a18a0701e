"""Random-forest topic detection over hashed bag-of-words features.

The forest is grown from scratch: each tree fits a bootstrap resample,
splits are chosen by Gini impurity over sqrt(dim) randomly sampled feature
indices per node, and growth stops at ``max_depth`` or ``min_leaf``. All
randomness flows through the seeded LCG so training is bit-identical for a
fixed seed and corpus.

Feature layout: the first ``feature_dim - 6`` slots are the hashed
bag-of-words block (the dimension must be a power of two); the last 6 slots
carry the prior topic distribution of the conversation, zeros when absent.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from ..hashing import Lcg64, derive_seed
from .tokens import FeatureVector, hash_features, tokenize

TOPICS = ("Politics", "Life", "Sports", "Entertainment", "Technology", "General")

N_TOPICS = len(TOPICS)

DISTRIBUTION_TOLERANCE = 1e-9


@dataclass
class TopicDistribution:
    """Probabilities over the six topics, ordered as in ``TOPICS``."""

    probabilities: list[float]

    def __post_init__(self):
        if len(self.probabilities) != N_TOPICS:
            raise ValueError(f"expected {N_TOPICS} probabilities")
        if any(p < 0 for p in self.probabilities):
            raise ValueError("probabilities must be nonnegative")
        if abs(sum(self.probabilities) - 1.0) > DISTRIBUTION_TOLERANCE:
            raise ValueError("probabilities must sum to 1")

    @classmethod
    def point_mass(cls, topic: str) -> "TopicDistribution":
        return cls([1.0 if t == topic else 0.0 for t in TOPICS])

    @classmethod
    def uniform(cls) -> "TopicDistribution":
        return cls([1.0 / N_TOPICS] * N_TOPICS)

    def argmax_topic(self) -> str:
        """Most probable topic; ties break by the fixed topic order."""
        best = max(range(N_TOPICS), key=lambda i: (self.probabilities[i], -i))
        return TOPICS[best]

    def as_map(self) -> dict[str, float]:
        return dict(zip(TOPICS, self.probabilities))


@dataclass
class ForestConfig:
    n_trees: int = 20
    max_depth: int = 12
    min_leaf: int = 2
    feature_dim: int = 1024 + N_TOPICS
    seed: int = 0

    @property
    def bow_dim(self) -> int:
        return self.feature_dim - N_TOPICS

    def __post_init__(self):
        if self.n_trees < 1:
            raise ValueError("n_trees must be >= 1")
        bow = self.bow_dim
        if bow <= 0 or bow & (bow - 1) != 0:
            raise ValueError("feature_dim - 6 must be a positive power of two")


@dataclass
class TreeNode:
    """Internal node (feature/threshold/children) or leaf (distribution)."""

    feature: int = -1
    threshold: float = 0.0
    left: "TreeNode | None" = None
    right: "TreeNode | None" = None
    distribution: list[float] | None = None

    @property
    def is_leaf(self) -> bool:
        return self.distribution is not None


@dataclass
class TopicModel:
    trees: list[TreeNode]
    config: ForestConfig


def topic_features(
    text: str,
    prior: TopicDistribution | None,
    config: ForestConfig,
    stopwords: frozenset[str] | None = None,
) -> FeatureVector:
    """Hashed bag-of-words plus the six prior-probability slots."""
    vec = hash_features(tokenize(text, stopwords), config.bow_dim)
    full = FeatureVector(dim=config.feature_dim, values=dict(vec.values))
    if prior is not None:
        for i, p in enumerate(prior.probabilities):
            if p != 0.0:
                full.values[config.bow_dim + i] = p
    return full


def train_topic_forest(
    labeled_corpus: list[tuple[str, str]],
    config: ForestConfig,
    stopwords: frozenset[str] | None = None,
) -> TopicModel:
    """Fit the forest on (text, topic) pairs.

    A single-class corpus is accepted and produces a degenerate constant
    model; an empty corpus is an error.
    """
    if not labeled_corpus:
        raise ValueError("corpus must be nonempty")
    samples = []
    for text, topic in labeled_corpus:
        if topic not in TOPICS:
            raise ValueError(f"unknown topic {topic!r}")
        samples.append((topic_features(text, None, config, stopwords), TOPICS.index(topic)))

    n = len(samples)
    n_features_per_split = max(1, int(math.isqrt(config.feature_dim)))
    trees = []
    for t in range(config.n_trees):
        rng = Lcg64(derive_seed(config.seed, f"tree:{t}"))
        bootstrap = [samples[rng.randrange(n)] for _ in range(n)]
        trees.append(_grow_tree(bootstrap, rng, config, n_features_per_split, depth=0))
    return TopicModel(trees=trees, config=config)


def _class_counts(samples: list[tuple[FeatureVector, int]]) -> list[int]:
    counts = [0] * N_TOPICS
    for _, label in samples:
        counts[label] += 1
    return counts


def _leaf(samples: list[tuple[FeatureVector, int]]) -> TreeNode:
    counts = _class_counts(samples)
    total = sum(counts)
    return TreeNode(distribution=[c / total for c in counts])


def _gini(counts: list[int], total: int) -> float:
    if total == 0:
        return 0.0
    return 1.0 - sum((c / total) ** 2 for c in counts)


def _grow_tree(
    samples: list[tuple[FeatureVector, int]],
    rng: Lcg64,
    config: ForestConfig,
    n_features_per_split: int,
    depth: int,
) -> TreeNode:
    counts = _class_counts(samples)
    n = len(samples)
    if depth >= config.max_depth or n < 2 * config.min_leaf or max(counts) == n:
        return _leaf(samples)

    features = rng.sample_indices(config.feature_dim, n_features_per_split)
    best: tuple[float, int, float] | None = None  # (weighted gini, feature, threshold)
    for f in features:
        pairs = sorted((x.get(f), y) for x, y in samples)
        if pairs[0][0] == pairs[-1][0]:
            continue
        left_counts = [0] * N_TOPICS
        n_left = 0
        # Evaluate every boundary between distinct consecutive values.
        for i in range(n - 1):
            left_counts[pairs[i][1]] += 1
            n_left += 1
            if pairs[i][0] == pairs[i + 1][0]:
                continue
            n_right = n - n_left
            if n_left < config.min_leaf or n_right < config.min_leaf:
                continue
            right_counts = [c - lc for c, lc in zip(counts, left_counts)]
            weighted = (
                n_left * _gini(left_counts, n_left) + n_right * _gini(right_counts, n_right)
            ) / n
            if best is None or weighted < best[0]:
                threshold = (pairs[i][0] + pairs[i + 1][0]) / 2.0
                best = (weighted, f, threshold)

    if best is None:
        return _leaf(samples)

    _, feature, threshold = best
    left_samples = [(x, y) for x, y in samples if x.get(feature) <= threshold]
    right_samples = [(x, y) for x, y in samples if x.get(feature) > threshold]
    return TreeNode(
        feature=feature,
        threshold=threshold,
        left=_grow_tree(left_samples, rng, config, n_features_per_split, depth + 1),
        right=_grow_tree(right_samples, rng, config, n_features_per_split, depth + 1),
    )


def _tree_predict(node: TreeNode, features: FeatureVector) -> list[float]:
    while not node.is_leaf:
        node = node.left if features.get(node.feature) <= node.threshold else node.right
    return node.distribution


def classify_topic(
    model: TopicModel,
    text: str,
    prior: TopicDistribution | None = None,
    stopwords: frozenset[str] | None = None,
) -> TopicDistribution:
    """Mean of the leaf distributions reached in each tree."""
    features = topic_features(text, prior, model.config, stopwords)
    sums = [0.0] * N_TOPICS
    for tree in model.trees:
        for i, p in enumerate(_tree_predict(tree, features)):
            sums[i] += p
    n = len(model.trees)
    return TopicDistribution([s / n for s in sums])


def load_topic_corpus(path: str | Path) -> list[tuple[str, str]]:
    """Labeled corpus file: one ``{"text", "topic"}`` record per line."""
    corpus = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            corpus.append((rec["text"], rec["topic"]))
    return corpus


# ------------------------------------------------------------ serialization


def _node_to_dict(node: TreeNode) -> dict:
    if node.is_leaf:
        return {"distribution": node.distribution}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "left": _node_to_dict(node.left),
        "right": _node_to_dict(node.right),
    }


def _node_from_dict(d: dict) -> TreeNode:
    if "distribution" in d:
        return TreeNode(distribution=list(d["distribution"]))
    return TreeNode(
        feature=d["feature"],
        threshold=d["threshold"],
        left=_node_from_dict(d["left"]),
        right=_node_from_dict(d["right"]),
    )


def save_topic_model(model: TopicModel, path: str | Path) -> None:
    doc = {
        "config": {
            "n_trees": model.config.n_trees,
            "max_depth": model.config.max_depth,
            "min_leaf": model.config.min_leaf,
            "feature_dim": model.config.feature_dim,
            "seed": model.config.seed,
        },
        "topics": list(TOPICS),
        "trees": [_node_to_dict(t) for t in model.trees],
    }
    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def load_topic_model(path: str | Path) -> TopicModel:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    config = ForestConfig(**doc["config"])
    trees = [_node_from_dict(t) for t in doc["trees"]]
    if len(trees) != config.n_trees:
        raise ValueError("tree count does not match config")
    return TopicModel(trees=trees, config=config)
