"""Data model and ingestion for the trust-scale corpus.

The corpus file is a single JSON document:
``{"scales": [...], "source_note": "..."}`` with lowercase enum strings.
Unknown enum strings are hard errors; silent coercion would corrupt ranking.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import DuplicateId, MalformedRecord, MissingScales


class Domain(str, Enum):
    AUTOMATION = "automation"
    ECOMMERCE = "e-commerce"
    HUMAN = "human"


class Construct(str, Enum):
    DISPOSITIONAL = "dispositional"
    HISTORY_BASED = "history-based"
    SITUATIONAL = "situational"


class Valence(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"


@dataclass(frozen=True)
class ScaleItem:
    item_id: str
    text: str
    valence: Valence = Valence.NEUTRAL


@dataclass(frozen=True)
class Scale:
    scale_id: str
    name: str
    year: int
    citations: int
    domain: Domain
    construct: Construct
    items: tuple[ScaleItem, ...]


@dataclass(frozen=True)
class ScaleCorpus:
    """Immutable after load; safe to share across concurrent readers."""

    scales: tuple[Scale, ...]
    source_note: str = ""

    def get(self, scale_id: str) -> Scale | None:
        for scale in self.scales:
            if scale.scale_id == scale_id:
                return scale
        return None

    def __len__(self) -> int:
        return len(self.scales)


@dataclass(frozen=True)
class Violation:
    """One invariant violation found by validate_corpus."""

    scale_id: str
    field: str
    rule: str


def _parse_enum(cls, raw, locator: str):
    try:
        return cls(raw)
    except ValueError:
        allowed = ", ".join(e.value for e in cls)
        raise MalformedRecord(f"unknown {cls.__name__.lower()} {raw!r} (allowed: {allowed})", locator)


def _parse_item(raw: dict, locator: str) -> ScaleItem:
    if not isinstance(raw, dict):
        raise MalformedRecord("item record is not an object", locator)
    try:
        item_id = str(raw["item_id"])
        text = str(raw["text"])
    except KeyError as exc:
        raise MalformedRecord(f"item missing field {exc}", locator)
    valence = _parse_enum(Valence, raw.get("valence", "neutral"), locator)
    if not text:
        raise MalformedRecord("item text empty", locator)
    return ScaleItem(item_id=item_id, text=text, valence=valence)


def _parse_scale(raw: dict, locator: str) -> Scale:
    if not isinstance(raw, dict):
        raise MalformedRecord("scale record is not an object", locator)
    try:
        scale_id = str(raw["scale_id"])
        name = str(raw["name"])
        year = int(raw["year"])
        citations = int(raw["citations"])
        domain = _parse_enum(Domain, raw["domain"], locator)
        construct = _parse_enum(Construct, raw["construct"], locator)
        raw_items = raw["items"]
    except KeyError as exc:
        raise MalformedRecord(f"scale missing field {exc}", locator)
    except (TypeError, ValueError):
        raise MalformedRecord("year/citations not integers", locator)
    if not isinstance(raw_items, list):
        raise MalformedRecord("items is not a list", locator)
    items = []
    seen = set()
    for i, raw_item in enumerate(raw_items):
        item = _parse_item(raw_item, f"{locator}/items[{i}]")
        if item.item_id in seen:
            raise DuplicateId(f"duplicate item_id {item.item_id!r} in scale {scale_id!r}")
        seen.add(item.item_id)
        items.append(item)
    return Scale(scale_id=scale_id, name=name, year=year, citations=citations,
                 domain=domain, construct=construct, items=tuple(items))


def load_corpus(path: str | Path) -> ScaleCorpus:
    """Parse a corpus file, preserving scale and item order."""
    text = Path(path).read_text(encoding="utf-8")
    if not text.strip():
        raise MissingScales(f"{path}: empty file")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedRecord(f"invalid JSON: {exc}", str(path))
    if not isinstance(doc, dict) or "scales" not in doc:
        raise MalformedRecord("top level must be an object with a 'scales' list", str(path))
    raw_scales = doc["scales"]
    if not isinstance(raw_scales, list):
        raise MalformedRecord("'scales' is not a list", str(path))
    if not raw_scales:
        raise MissingScales(f"{path}: no scales")
    scales = []
    seen = set()
    for i, raw in enumerate(raw_scales):
        scale = _parse_scale(raw, f"scales[{i}]")
        if scale.scale_id in seen:
            raise DuplicateId(f"duplicate scale_id {scale.scale_id!r}")
        seen.add(scale.scale_id)
        scales.append(scale)
    return ScaleCorpus(scales=tuple(scales), source_note=str(doc.get("source_note", "")))


def save_corpus(corpus: ScaleCorpus, path: str | Path) -> None:
    """Inverse of load_corpus (round-trips the in-memory model)."""
    doc = {
        "source_note": corpus.source_note,
        "scales": [
            {
                "scale_id": s.scale_id,
                "name": s.name,
                "year": s.year,
                "citations": s.citations,
                "domain": s.domain.value,
                "construct": s.construct.value,
                "items": [
                    {"item_id": it.item_id, "text": it.text, "valence": it.valence.value}
                    for it in s.items
                ],
            }
            for s in corpus.scales
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2) + "\n", encoding="utf-8")


def validate_scale(scale: Scale) -> list[Violation]:
    violations = []
    if not scale.items:
        violations.append(Violation(scale.scale_id, "items", "items non-empty"))
    if scale.citations < 0:
        violations.append(Violation(scale.scale_id, "citations", "citations >= 0"))
    seen = set()
    for item in scale.items:
        if not item.text:
            violations.append(Violation(scale.scale_id, f"items[{item.item_id}].text", "text non-empty"))
        if item.item_id in seen:
            violations.append(Violation(scale.scale_id, f"items[{item.item_id}]", "item_id unique within scale"))
        seen.add(item.item_id)
    return violations


def validate_corpus(corpus: ScaleCorpus) -> list[Violation]:
    """Empty report iff every Scale/ScaleItem invariant holds."""
    violations = []
    seen = set()
    for scale in corpus.scales:
        if scale.scale_id in seen:
            violations.append(Violation(scale.scale_id, "scale_id", "scale_id unique within corpus"))
        seen.add(scale.scale_id)
        violations.extend(validate_scale(scale))
    return violations


def filter_scales(corpus: ScaleCorpus,
                  domain: Domain | None = None,
                  construct: Construct | None = None) -> ScaleCorpus:
    """Keep exactly the scales matching every provided criterion, order preserved."""
    kept = tuple(
        s for s in corpus.scales
        if (domain is None or s.domain == domain) and (construct is None or s.construct == construct)
    )
    return ScaleCorpus(scales=kept, source_note=corpus.source_note)
