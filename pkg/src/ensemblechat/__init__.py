"""Ensemble open-domain dialog engine.

Replies come from an ensemble of strategies, arbitrated by priority tier
and engagement reranking: rule-based templates (intents, persona backstory,
entity templates), knowledge-base question answering, corpus retrieval and
a seq2seq neural generator.
"""

__version__ = "0.1.0"

from .config import PipelineConfig, load_config, load_default_config
from .pipeline import Pipeline
from .session import Candidate, Session, SessionStore, Trace, Turn

__all__ = [
    "PipelineConfig",
    "load_config",
    "load_default_config",
    "Pipeline",
    "Candidate",
    "Session",
    "SessionStore",
    "Trace",
    "Turn",
    "__version__",
]
