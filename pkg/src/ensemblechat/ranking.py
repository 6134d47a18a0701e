"""Engagement features, linear SVM, content filtering and reply selection.

The SVM is trained Pegasos-style on L2-regularized hinge loss: per-step
learning rate 1/(lambda*t) with a seeded shuffle each epoch. The weight
vector is kept as scale * direction so the per-step shrink is O(1) and
updates stay O(nnz).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .hashing import Lcg64, derive_seed, fnv1a64
from .nlu.tokens import FeatureVector, split_tokens

FEATURE_MODES = ("lexical", "external", "full")

LEXICAL_BOW_DIM = 2**14
#: lexical block = hashed bag of words ++ token_count/100 ++ duplicate_ratio
LEXICAL_DIM = LEXICAL_BOW_DIM + 2
#: external block = log(1+elapsed) ++ log(1+post_upvotes) ++ comment/post overlap
EXTERNAL_DIM = 3
FEATURE_DIM = LEXICAL_DIM + EXTERNAL_DIM

ENGAGING_SCORE_THRESHOLD = 200

DEFAULT_SVM_LAMBDA = 1e-4
DEFAULT_SVM_EPOCHS = 20


@dataclass
class EngagementExample:
    comment_text: str
    comment_score: int
    post_text: str = ""
    post_upvotes: int = 0
    elapsed_secs: int = 0

    def __post_init__(self):
        if self.elapsed_secs < 0:
            raise ValueError("elapsed_secs must be >= 0")


@dataclass
class SvmModel:
    weights: np.ndarray
    bias: float
    lam: float
    feature_mode: str
    dim: int

    def __post_init__(self):
        if len(self.weights) != self.dim:
            raise ValueError("weight length must equal dim")
        if self.feature_mode not in FEATURE_MODES:
            raise ValueError(f"unknown feature mode {self.feature_mode!r}")
        if not np.all(np.isfinite(self.weights)) or not math.isfinite(self.bias):
            raise ValueError("model parameters must be finite")


@dataclass
class FilterPolicy:
    blocklist: frozenset[str] = frozenset()
    min_tokens: int = 1
    max_chars: int = 280
    max_repeat_ratio: float = 0.5

    def __post_init__(self):
        if self.min_tokens <= 0 or self.max_chars <= 0 or self.max_repeat_ratio <= 0:
            raise ValueError("filter thresholds must be positive")


def load_blocklist(path: str | Path) -> frozenset[str]:
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip().lower()
            if word and not word.startswith("#"):
                words.add(word)
    return frozenset(words)


def load_engagement_corpus(path: str | Path) -> list[EngagementExample]:
    """Corpus file: one record per line with the five example fields."""
    examples = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            examples.append(
                EngagementExample(
                    comment_text=rec["comment_text"],
                    comment_score=rec["comment_score"],
                    post_text=rec.get("post_text", ""),
                    post_upvotes=rec.get("post_upvotes", 0),
                    elapsed_secs=rec.get("elapsed_secs", 0),
                )
            )
    return examples


def label_example(comment_score: int) -> int | None:
    """1 = engaging (score > 200), 0 = non-engaging (score == 0), else excluded."""
    if comment_score > ENGAGING_SCORE_THRESHOLD:
        return 1
    if comment_score == 0:
        return 0
    return None


def duplicate_ratio(tokens: list[str]) -> float:
    if not tokens:
        return 0.0
    return 1.0 - len(set(tokens)) / len(tokens)


def extract_features(example: EngagementExample, mode: str) -> FeatureVector:
    """Feature vector for one example; all modes share the fixed layout.

    Indices [0, 2^14) hold the hashed comment bag of words, then
    token_count/100 and duplicate_ratio, then the three external features.
    Modes outside ``full`` leave the other block zero.
    """
    if mode not in FEATURE_MODES:
        raise ValueError(f"unknown feature mode {mode!r}")
    vec = FeatureVector(dim=FEATURE_DIM)
    comment_tokens = split_tokens(example.comment_text)
    if mode in ("lexical", "full"):
        for tok in comment_tokens:
            vec.add(fnv1a64(tok) % LEXICAL_BOW_DIM)
        if comment_tokens:
            vec.values[LEXICAL_BOW_DIM] = len(comment_tokens) / 100.0
            ratio = duplicate_ratio(comment_tokens)
            if ratio != 0.0:
                vec.values[LEXICAL_BOW_DIM + 1] = ratio
    if mode in ("external", "full"):
        post_tokens = split_tokens(example.post_text)
        elapsed = math.log1p(example.elapsed_secs)
        upvotes = math.log1p(max(example.post_upvotes, 0))
        comment_set, post_set = set(comment_tokens), set(post_tokens)
        if comment_set and post_set:
            overlap = len(comment_set & post_set) / len(comment_set | post_set)
        else:
            overlap = 0.0
        base = LEXICAL_DIM
        if elapsed != 0.0:
            vec.values[base] = elapsed
        if upvotes != 0.0:
            vec.values[base + 1] = upvotes
        if overlap != 0.0:
            vec.values[base + 2] = overlap
    return vec


def train_svm(
    examples: list[FeatureVector],
    labels: list[int],
    lam: float = DEFAULT_SVM_LAMBDA,
    epochs: int = DEFAULT_SVM_EPOCHS,
    seed: int = 0,
    feature_mode: str = "full",
) -> SvmModel:
    """Pegasos subgradient descent on hinge loss; deterministic per seed."""
    if len(examples) != len(labels):
        raise ValueError("examples and labels must align")
    if not examples:
        raise ValueError("no training data")
    if len(set(labels)) < 2:
        raise ValueError("training needs both classes present")

    # The intercept rides along as a virtual always-1 feature so it shares
    # the Pegasos shrink; w is kept as scale * direction for O(nnz) steps.
    direction = np.zeros(FEATURE_DIM)
    bias_direction = 0.0
    scale = 1.0
    t = 0
    order = list(range(len(examples)))
    rng = Lcg64(derive_seed(seed, "svm-shuffle"))
    for _ in range(epochs):
        rng.shuffle(order)
        for idx in order:
            t += 1
            eta = 1.0 / (lam * t)
            x = examples[idx]
            y = 1.0 if labels[idx] == 1 else -1.0
            margin = y * scale * (_sparse_dot(direction, x) + bias_direction)
            scale *= 1.0 - eta * lam  # = 1 - 1/t; zero at t=1 resets the vector
            if scale == 0.0:
                direction[:] = 0.0
                bias_direction = 0.0
                scale = 1.0
            if margin < 1.0:
                coef = eta * y / scale
                for i, v in x.values.items():
                    direction[i] += coef * v
                bias_direction += coef
            if abs(scale) < 1e-9:
                direction *= scale
                bias_direction *= scale
                scale = 1.0
    return SvmModel(
        weights=direction * scale,
        bias=bias_direction * scale,
        lam=lam,
        feature_mode=feature_mode,
        dim=FEATURE_DIM,
    )


def _sparse_dot(weights: np.ndarray, x: FeatureVector) -> float:
    return float(sum(weights[i] * v for i, v in x.values.items()))


def score(model: SvmModel, features: FeatureVector) -> float:
    """Raw decision value weights . features + bias."""
    if features.dim != model.dim:
        raise ValueError(f"feature dim {features.dim} != model dim {model.dim}")
    return _sparse_dot(model.weights, features) + model.bias


def predict(model: SvmModel, features: FeatureVector) -> int:
    return 1 if score(model, features) >= 0.0 else 0


def evaluate_accuracy(model: SvmModel, examples: list[FeatureVector], labels: list[int]) -> float:
    if not examples:
        raise ValueError("no evaluation data")
    correct = sum(1 for x, y in zip(examples, labels) if predict(model, x) == y)
    return correct / len(examples)


def save_svm(model: SvmModel, path: str | Path) -> None:
    doc = {
        "weights": model.weights.tolist(),
        "bias": model.bias,
        "lambda": model.lam,
        "feature_mode": model.feature_mode,
        "dim": model.dim,
    }
    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def load_svm(path: str | Path) -> SvmModel:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return SvmModel(
        weights=np.array(doc["weights"], dtype=np.float64),
        bias=doc["bias"],
        lam=doc["lambda"],
        feature_mode=doc["feature_mode"],
        dim=doc["dim"],
    )


# --------------------------------------------------------------- selection

from .session import Candidate  # noqa: E402  (session has no ranking dependency)


def content_filter(candidates: list[Candidate], policy: FilterPolicy) -> list[Candidate]:
    """Drop blocklisted, too-short, too-long, unprintable or repetitive texts."""
    kept = []
    for cand in candidates:
        tokens = split_tokens(cand.text)
        if len(tokens) < policy.min_tokens:
            continue
        if len(cand.text) > policy.max_chars:
            continue
        if any(tok in policy.blocklist for tok in tokens):
            continue
        if any(not ch.isprintable() for ch in cand.text):
            continue
        if duplicate_ratio(tokens) > policy.max_repeat_ratio:
            continue
        kept.append(cand)
    return kept


def select_reply(candidates: list[Candidate], lexical_model: SvmModel | None) -> Candidate | None:
    """Priority-then-engagement selection over already-filtered candidates.

    Lowest tier wins; inside tier 1 the fixed rule order decides; inside
    tier 3 the lexical-mode SVM margin decides, ties broken retrieval before
    neural and then by text order.
    """
    if not candidates:
        return None
    tier = min(c.priority_tier for c in candidates)
    pool = [c for c in candidates if c.priority_tier == tier]
    if tier == 1:
        return min(pool, key=lambda c: c.rule_rank)
    if tier == 2:
        return pool[0]
    for cand in pool:
        if lexical_model is not None:
            features = extract_features(EngagementExample(cand.text, 0), mode="lexical")
            cand.margin = score(lexical_model, features)
        elif cand.margin is None:
            cand.margin = 0.0
    generator_order = {"retrieval": 0, "neural": 1}
    return min(pool, key=lambda c: (-c.margin, generator_order[c.generator], c.text))
