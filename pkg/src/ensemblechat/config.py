"""Pipeline configuration from a flat key-value text file.

Lines are ``key = value``; ``#`` starts a comment. Relative paths resolve
against the config file's directory. Every referenced data/model file must
exist at startup (the session store directory is created on demand).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

DEFAULT_FALLBACK_LINE = "Hmm, I am not sure what to say. Tell me more?"


@dataclass
class PipelineConfig:
    intents: Path
    backstory: Path
    kb: Path
    templates: Path
    facts: Path
    stopwords: Path
    corpus: Path
    dictionary: Path
    blocklist: Path
    topic_model: Path
    engagement_model: Path
    seq2seq_models: Path  # directory holding seq2seq_<topic>.json files
    store_dir: Path
    intent_threshold: float = 0.6
    backstory_threshold: float = 0.7
    entity_threshold: float = 0.5
    max_misspell_ratio: float = 0.2
    retrieval_k: int = 100
    retrieval_window_secs: int = 7 * 24 * 3600
    seed: int = 42
    fallback_line: str = DEFAULT_FALLBACK_LINE

    def validate(self) -> None:
        for name in (
            "intents",
            "backstory",
            "kb",
            "templates",
            "facts",
            "stopwords",
            "corpus",
            "dictionary",
            "blocklist",
            "topic_model",
            "engagement_model",
            "seq2seq_models",
        ):
            path = getattr(self, name)
            if not Path(path).exists():
                raise FileNotFoundError(f"config path {name} does not exist: {path}")


_PATH_KEYS = {
    "intents",
    "backstory",
    "kb",
    "templates",
    "facts",
    "stopwords",
    "corpus",
    "dictionary",
    "blocklist",
    "topic_model",
    "engagement_model",
    "seq2seq_models",
    "store_dir",
}

_INT_KEYS = {"retrieval_k", "seed"}
_FLOAT_KEYS = {
    "intent_threshold",
    "backstory_threshold",
    "entity_threshold",
    "max_misspell_ratio",
}


def parse_config_text(text: str, base_dir: Path) -> PipelineConfig:
    values: dict[str, object] = {}
    for raw_line in text.splitlines():
        line = raw_line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"bad config line: {raw_line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key == "store_dir":
            # runtime output; resolves against the working directory
            values[key] = Path(value)
        elif key in _PATH_KEYS:
            path = Path(value)
            values[key] = path if path.is_absolute() else (base_dir / path).resolve()
        elif key in _INT_KEYS:
            values[key] = int(value)
        elif key in _FLOAT_KEYS:
            values[key] = float(value)
        elif key == "retrieval_window_days":
            values["retrieval_window_secs"] = int(float(value) * 24 * 3600)
        elif key == "retrieval_window_secs":
            values["retrieval_window_secs"] = int(value)
        elif key == "fallback_line":
            values[key] = value
        else:
            raise ValueError(f"unknown config key {key!r}")
    return PipelineConfig(**values)  # type: ignore[arg-type]


def load_config(path: str | Path) -> PipelineConfig:
    path = Path(path)
    config = parse_config_text(path.read_text(encoding="utf-8"), path.parent.resolve())
    config.validate()
    return config


def default_config_path() -> Path:
    return Path(str(resources.files("ensemblechat").joinpath("data", "config.txt")))


def load_default_config(store_dir: str | Path | None = None) -> PipelineConfig:
    config = load_config(default_config_path())
    if store_dir is not None:
        config.store_dir = Path(store_dir)
    return config
