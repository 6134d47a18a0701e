"""Local knowledge snapshot: entity records, relation templates and facts.

Entity attributes either reference another entity (``{"ref": "<id>"}`` in
the data file) or hold a literal string. Relation templates are fill-in
texts keyed by (master entity type, feature type); the slot syntax is the
type name in square brackets, e.g. ``[film]`` and ``[cast member]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .nlu.tokens import split_tokens


@dataclass(frozen=True)
class EntityRef:
    entity_id: str


AttrValue = "EntityRef | str"


@dataclass
class EntityRecord:
    id: str
    label: str
    type: str
    aliases: list[str]
    attributes: dict[str, EntityRef | str] = field(default_factory=dict)

    def __post_init__(self):
        if self.label not in self.aliases:
            self.aliases = [self.label, *self.aliases]


@dataclass
class RelationTemplate:
    master_type: str
    feature_type: str
    text: str

    def __post_init__(self):
        for slot in (f"[{self.master_type}]", f"[{self.feature_type}]"):
            if slot not in self.text:
                raise ValueError(f"template text missing slot {slot}: {self.text!r}")


@dataclass
class Fact:
    subject: str
    relation: str
    answer: str


class KnowledgeBase:
    """Immutable entity store with an alias index for longest-match linking."""

    def __init__(self, entities: list[EntityRecord]):
        self.entities: dict[str, EntityRecord] = {}
        for record in entities:
            if record.id in self.entities:
                raise ValueError(f"duplicate entity id {record.id!r}")
            self.entities[record.id] = record
        self._validate_references()
        # alias token tuple -> sorted ids of entities sharing that alias
        self.alias_index: dict[tuple[str, ...], list[str]] = {}
        for record in entities:
            for alias in record.aliases:
                key = tuple(split_tokens(alias))
                if not key:
                    continue
                ids = self.alias_index.setdefault(key, [])
                if record.id not in ids:
                    ids.append(record.id)
        for ids in self.alias_index.values():
            ids.sort()
        self.max_alias_tokens = max((len(k) for k in self.alias_index), default=0)

    def _validate_references(self) -> None:
        for record in self.entities.values():
            for feature, value in record.attributes.items():
                if isinstance(value, EntityRef) and value.entity_id not in self.entities:
                    raise ValueError(
                        f"entity {record.id!r} attribute {feature!r} references "
                        f"unknown entity {value.entity_id!r}"
                    )

    def get(self, entity_id: str) -> EntityRecord:
        return self.entities[entity_id]

    def value_label(self, value: EntityRef | str) -> str:
        """Label of a referenced entity, or the literal string itself."""
        if isinstance(value, EntityRef):
            return self.entities[value.entity_id].label
        return value


def load_kb(path: str | Path) -> KnowledgeBase:
    entities = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            attributes: dict[str, EntityRef | str] = {}
            for feature, value in rec.get("attributes", {}).items():
                if isinstance(value, dict):
                    attributes[feature] = EntityRef(value["ref"])
                else:
                    attributes[feature] = str(value)
            entities.append(
                EntityRecord(
                    id=rec["id"],
                    label=rec["label"],
                    type=rec["type"],
                    aliases=list(rec.get("aliases", [])),
                    attributes=attributes,
                )
            )
    return KnowledgeBase(entities)


def load_templates(path: str | Path) -> list[RelationTemplate]:
    templates = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            templates.append(
                RelationTemplate(
                    master_type=rec["master_type"],
                    feature_type=rec["feature_type"],
                    text=rec["text"],
                )
            )
    return templates


def load_facts(path: str | Path, kb: KnowledgeBase | None = None) -> list[Fact]:
    facts = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            fact = Fact(subject=rec["subject"], relation=rec["relation"], answer=rec["answer"])
            if kb is not None and fact.subject not in kb.entities:
                raise ValueError(f"fact subject {fact.subject!r} not in knowledge base")
            facts.append(fact)
    return facts
