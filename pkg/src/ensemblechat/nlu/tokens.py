"""Tokenization, stopword filtering and feature hashing."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from ..hashing import fnv1a64

_TOKEN_RE = re.compile(r"[A-Za-z0-9]+")


def split_tokens(text: str) -> list[str]:
    """Lowercased alphanumeric runs, no stopword filtering."""
    return [m.group().lower() for m in _TOKEN_RE.finditer(text)]


def token_spans(text: str) -> list[tuple[str, int, int]]:
    """(lowercased token, start, end) with character offsets into ``text``."""
    return [(m.group().lower(), m.start(), m.end()) for m in _TOKEN_RE.finditer(text)]


def load_stopwords(path: str | Path) -> frozenset[str]:
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip().lower()
            if word and not word.startswith("#"):
                words.add(word)
    return frozenset(words)


@lru_cache(maxsize=1)
def default_stopwords() -> frozenset[str]:
    from . import data_path

    return load_stopwords(data_path("stopwords.txt"))


def tokenize(text: str, stopwords: frozenset[str] | None = None) -> list[str]:
    """Lowercase tokens split on non-alphanumeric runs, stopwords removed."""
    if stopwords is None:
        stopwords = default_stopwords()
    return [t for t in split_tokens(text) if t not in stopwords]


def jaccard(a: set[str], b: set[str]) -> float:
    """Jaccard similarity of two token sets; 0.0 when either is empty."""
    if not a or not b:
        return 0.0
    return len(a & b) / len(a | b)


@dataclass
class FeatureVector:
    """Sparse feature vector: index -> value, with an explicit dimension."""

    dim: int
    values: dict[int, float] = field(default_factory=dict)

    def add(self, index: int, amount: float = 1.0) -> None:
        if not 0 <= index < self.dim:
            raise IndexError(f"feature index {index} out of range for dim {self.dim}")
        self.values[index] = self.values.get(index, 0.0) + amount

    def get(self, index: int) -> float:
        return self.values.get(index, 0.0)


def hash_features(tokens: list[str], dim: int) -> FeatureVector:
    """Hashed bag of words: index = fnv1a64(token) mod dim, value = count.

    ``dim`` must be a power of two so the modulo is a clean bit mask.
    """
    if dim <= 0 or dim & (dim - 1) != 0:
        raise ValueError(f"dim must be a power of two, got {dim}")
    vec = FeatureVector(dim=dim)
    for tok in tokens:
        vec.add(fnv1a64(tok) % dim)
    return vec
