"""Scale scoring and selection feeding the prompt database.

Scores each scale by a smoothed log-odds of domain-lexicon tokens among its
preprocessed item tokens, ranks tracks deterministically, and unions the
domain and construct tracks (plus manual additions) into the database of
items used for prompt generation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import Domain, Scale, ScaleCorpus, Valence, validate_scale
from .errors import EmptyScaleText, UnknownScaleId
from .resources import domain_lexicon_terms, read_wordlist
from .textprep import preprocess_text


@dataclass(frozen=True)
class DomainLexicon:
    """Stemmed, lowercase terms characterizing one scale domain."""

    domain: Domain
    terms: frozenset[str]

    def __post_init__(self):
        if not self.terms:
            raise ValueError("lexicon terms must be non-empty")


def load_lexicon(path: str | Path, domain: Domain) -> DomainLexicon:
    """Lexicon file: one stemmed term per line, '#' comments."""
    return DomainLexicon(domain=domain, terms=frozenset(read_wordlist(str(path))))


def bundled_lexicon(domain: Domain) -> DomainLexicon:
    return DomainLexicon(domain=domain, terms=domain_lexicon_terms(domain.value))


@dataclass(frozen=True)
class RankedScale:
    scale_id: str
    log_odds_score: float
    citations: int
    rank: int


@dataclass(frozen=True)
class DatabaseItem:
    """A scale item flattened into the prompt database, with provenance."""

    scale_id: str
    item_id: str
    text: str
    valence: Valence


@dataclass(frozen=True)
class Provenance:
    domain_track: tuple[str, ...] = ()
    construct_track: tuple[str, ...] = ()
    manual: tuple[str, ...] = ()


@dataclass(frozen=True)
class PromptDatabase:
    scales: tuple[Scale, ...]
    items: tuple[DatabaseItem, ...]
    provenance: Provenance = field(default_factory=Provenance)


def domain_log_odds(scale: Scale, lexicon: DomainLexicon,
                    stoplist: set[str] | None = None) -> float:
    """Smoothed log-odds of lexicon tokens among the scale's preprocessed tokens.

    With n preprocessed tokens of which k are lexicon members:
    ln((k + 0.5) / (n - k + 0.5)). Higher means more domain-specific.
    """
    stems = [s for item in scale.items for s in preprocess_text(item.text, stoplist)]
    n = len(stems)
    if n == 0:
        raise EmptyScaleText(f"scale {scale.scale_id!r} has no tokens after preprocessing")
    k = sum(1 for s in stems if s in lexicon.terms)
    return math.log((k + 0.5) / (n - k + 0.5))


def rank_scales(scales: list[Scale], score: dict[str, float], top_n: int) -> list[RankedScale]:
    """Sort by (score desc, citations desc, scale_id asc) and keep the top_n.

    Deterministic: two runs over the same input are identical.
    """
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    ordered = sorted(scales, key=lambda s: (-score[s.scale_id], -s.citations, s.scale_id))
    return [
        RankedScale(scale_id=s.scale_id, log_odds_score=score[s.scale_id],
                    citations=s.citations, rank=i + 1)
        for i, s in enumerate(ordered[:top_n])
    ]


def build_prompt_database(domain_track: list[RankedScale],
                          construct_track: list[RankedScale],
                          corpus: ScaleCorpus,
                          extra: list[Scale] | None = None) -> PromptDatabase:
    """Union both tracks plus manual extras; flatten items deterministically.

    Item order: scale_id ascending, item order within each scale preserved.
    """
    extra = extra or []
    for scale in extra:
        violations = validate_scale(scale)
        if violations:
            raise ValueError(f"extra scale {scale.scale_id!r} fails validation: {violations}")

    by_id: dict[str, Scale] = {}
    for ranked in list(domain_track) + list(construct_track):
        scale = corpus.get(ranked.scale_id)
        if scale is None:
            raise UnknownScaleId(f"ranked scale {ranked.scale_id!r} not in corpus")
        by_id[scale.scale_id] = scale
    for scale in extra:
        by_id.setdefault(scale.scale_id, scale)

    scales = tuple(by_id[sid] for sid in sorted(by_id))
    items = tuple(
        DatabaseItem(scale_id=s.scale_id, item_id=it.item_id, text=it.text, valence=it.valence)
        for s in scales
        for it in s.items
    )
    provenance = Provenance(
        domain_track=tuple(r.scale_id for r in domain_track),
        construct_track=tuple(r.scale_id for r in construct_track),
        manual=tuple(s.scale_id for s in extra),
    )
    return PromptDatabase(scales=scales, items=items, provenance=provenance)
