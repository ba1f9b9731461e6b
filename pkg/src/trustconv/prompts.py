"""Template engine for the directive-to-nondirective prompt continuum.

Levels run Descriptive (most directive) to Interpretive (least). Every
non-Descriptive prompt must pass the nondirectiveness lint: no token may
stem into the positive or negative valence lexicons, because a valenced
descriptor in the question anchors the respondent. Descriptive prompts are
directive by definition and are exempt token-wise, but the set as a whole
must keep positive- and negative-valenced descriptive prompts balanced
within one of each other.

The interpretive follow-up that mirrors the respondent's attitude is kept
as a template here; the dialog engine fills its {attitude} slot at runtime
with the attitude the respondent already expressed, which echoes rather
than anchors.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .corpus import Valence
from .errors import LintViolation, MissingSlot, PromptSetError, TemplateError
from .resources import concept_display_table, negative_stems, positive_stems
from .summarization import ClusterSummary
from .textprep import tokenize


class PromptLevel(str, Enum):
    DESCRIPTIVE = "descriptive"
    CONCEPTUAL = "conceptual"
    DECLARATIVE = "declarative"
    INTERPRETIVE = "interpretive"


_FORMATTER = string.Formatter()


def _pattern_fields(pattern: str) -> set[str]:
    return {name for _, name, _, _ in _FORMATTER.parse(pattern) if name}


@dataclass(frozen=True)
class PromptTemplate:
    level: PromptLevel
    pattern: str
    slots: tuple[str, ...] = ()

    def __post_init__(self):
        fields_in_pattern = _pattern_fields(self.pattern)
        if fields_in_pattern != set(self.slots):
            raise TemplateError(
                f"pattern placeholders {sorted(fields_in_pattern)} != declared slots {sorted(self.slots)}"
            )
        if self.level is PromptLevel.DECLARATIVE and self.slots:
            raise TemplateError("declarative templates take no slots")

    def fill(self, slot_values: dict[str, str]) -> str:
        """Exact substitution; slot_values keys must equal the declared slots."""
        if set(slot_values) != set(self.slots):
            raise MissingSlot(
                f"expected slots {sorted(self.slots)}, got {sorted(slot_values)}"
            )
        return self.pattern.format(**slot_values)


@dataclass(frozen=True)
class Prompt:
    level: PromptLevel
    text: str
    slot_values: dict[str, str] = field(default_factory=dict)
    provenance: str = ""
    valence: Valence | None = None  # descriptive prompts carry the source item's valence


@dataclass
class PromptSet:
    """Prompts grouped by level plus the ordered conceptual slot values."""

    declarative: list[Prompt]
    interpretive: list[Prompt]
    conceptual: list[Prompt]
    descriptive: list[Prompt]
    concept_slots: list[str]
    attitude_followup: PromptTemplate

    def opening_prompt(self) -> Prompt:
        return self.declarative[0]

    def generic_followup(self) -> Prompt:
        for p in self.interpretive:
            if not p.slot_values:
                return p
        return self.interpretive[0]

    def prompts_by_level(self) -> dict[PromptLevel, list[Prompt]]:
        return {
            PromptLevel.DECLARATIVE: self.declarative,
            PromptLevel.INTERPRETIVE: self.interpretive,
            PromptLevel.CONCEPTUAL: self.conceptual,
            PromptLevel.DESCRIPTIVE: self.descriptive,
        }

    def all_prompts(self) -> list[Prompt]:
        return self.declarative + self.interpretive + self.conceptual + self.descriptive


def lint_nondirective(prompt: Prompt,
                      positive: frozenset[str] | None = None,
                      negative: frozenset[str] | None = None) -> list[str]:
    """Empty list means pass.

    Flags every token whose stem is in a valence lexicon; Descriptive
    prompts skip the token check (their balance is a set-level rule,
    see check_descriptive_balance).
    """
    positive = positive if positive is not None else positive_stems()
    negative = negative if negative is not None else negative_stems()
    if not prompt.text.strip():
        return ["empty prompt"]
    if prompt.level is PromptLevel.DESCRIPTIVE:
        return []
    violations = []
    for token in tokenize(prompt.text):
        if token.stem in positive:
            violations.append(f"token {token.surface!r} stems to {token.stem!r} in positive lexicon")
        elif token.stem in negative:
            violations.append(f"token {token.surface!r} stems to {token.stem!r} in negative lexicon")
    return violations


def formulate_prompt(template: PromptTemplate, slot_values: dict[str, str],
                     provenance: str = "", valence: Valence | None = None,
                     positive: frozenset[str] | None = None,
                     negative: frozenset[str] | None = None) -> Prompt:
    """Substitute, lint, and wrap into a Prompt; raises LintViolation on failure."""
    text = template.fill(slot_values)
    prompt = Prompt(level=template.level, text=text, slot_values=dict(slot_values),
                    provenance=provenance, valence=valence)
    violations = lint_nondirective(prompt, positive, negative)
    if violations:
        raise LintViolation(violations)
    return prompt


def check_descriptive_balance(descriptive: list[Prompt]) -> list[str]:
    """Positive- and negative-valenced descriptive prompts must balance within 1."""
    pos = sum(1 for p in descriptive if p.valence is Valence.POSITIVE)
    neg = sum(1 for p in descriptive if p.valence is Valence.NEGATIVE)
    if abs(pos - neg) > 1:
        return [f"descriptive valence imbalance: {pos} positive vs {neg} negative"]
    return []


# -- template bank -----------------------------------------------------------

def load_templates(path: str | Path) -> list[PromptTemplate]:
    records = json.loads(Path(path).read_text(encoding="utf-8"))
    templates = []
    for rec in records:
        templates.append(PromptTemplate(
            level=PromptLevel(rec["level"]),
            pattern=rec["pattern"],
            slots=tuple(rec.get("slots", ())),
        ))
    return templates


def _pick(templates: list[PromptTemplate], level: PromptLevel,
          with_slots: bool | None = None) -> PromptTemplate:
    for t in templates:
        if t.level is not level:
            continue
        if with_slots is None or bool(t.slots) == with_slots:
            return t
    raise PromptSetError(f"template bank has no {level.value} template"
                         + ("" if with_slots is None else f" (with_slots={with_slots})"))


def display_form(stem: str, surface_forms: dict[str, str] | None = None) -> str:
    """Human-readable phrase for a conceptual slot.

    Prefers the curated concept table, then the most common corpus surface
    for the stem, then the raw stem.
    """
    table = concept_display_table()
    if stem in table:
        return table[stem]
    if surface_forms and stem in surface_forms:
        return surface_forms[stem]
    return stem


def item_clause(text: str) -> str:
    """Interrogative-rewrite clause for a descriptive prompt."""
    clause = text.strip().rstrip(".!?")
    if clause and clause[0].isupper() and not clause[:2].isupper():
        clause = clause[0].lower() + clause[1:]
    return clause


@dataclass
class DroppedPrompt:
    level: str
    text: str
    provenance: str
    violations: list[str]


@dataclass
class PromptSetBuild:
    prompt_set: PromptSet
    dropped: list[DroppedPrompt]


def build_prompt_set(summaries: list[ClusterSummary],
                     templates: list[PromptTemplate],
                     items=None,
                     surface_forms: dict[str, str] | None = None,
                     positive: frozenset[str] | None = None,
                     negative: frozenset[str] | None = None) -> PromptSetBuild:
    """Assemble the full prompt continuum deterministically.

    One conceptual prompt per cluster summary (lint failures dropped and
    reported, never emitted); a fixed declarative opening and interpretive
    follow-ups; descriptive prompts rewritten from the database items and
    trimmed from the end until positive/negative counts balance within 1.
    """
    if not summaries:
        raise ValueError("summaries must be non-empty")
    positive = positive if positive is not None else positive_stems()
    negative = negative if negative is not None else negative_stems()
    dropped: list[DroppedPrompt] = []

    declarative_t = _pick(templates, PromptLevel.DECLARATIVE)
    conceptual_t = _pick(templates, PromptLevel.CONCEPTUAL)
    descriptive_t = _pick(templates, PromptLevel.DESCRIPTIVE)
    attitude_t = _pick(templates, PromptLevel.INTERPRETIVE, with_slots=True)
    generic_t = _pick(templates, PromptLevel.INTERPRETIVE, with_slots=False)

    declarative = [formulate_prompt(declarative_t, {}, provenance="opening",
                                    positive=positive, negative=negative)]
    interpretive = [formulate_prompt(generic_t, {}, provenance="followup",
                                     positive=positive, negative=negative)]

    conceptual: list[Prompt] = []
    concept_slots: list[str] = []
    for summary in sorted(summaries, key=lambda s: s.cluster_id):
        concept = display_form(summary.selected_term, surface_forms)
        try:
            prompt = formulate_prompt(conceptual_t, {"concept": concept},
                                      provenance=f"cluster:{summary.cluster_id}",
                                      positive=positive, negative=negative)
        except LintViolation as exc:
            dropped.append(DroppedPrompt(level=PromptLevel.CONCEPTUAL.value,
                                         text=conceptual_t.pattern.format(concept=concept),
                                         provenance=f"cluster:{summary.cluster_id}",
                                         violations=exc.violations))
            continue
        conceptual.append(prompt)
        concept_slots.append(concept)

    descriptive: list[Prompt] = []
    for item in (items or []):
        clause = item_clause(item.text)
        prompt = Prompt(level=PromptLevel.DESCRIPTIVE,
                        text=descriptive_t.fill({"item_clause": clause}),
                        slot_values={"item_clause": clause},
                        provenance=f"item:{item.scale_id}/{item.item_id}",
                        valence=item.valence)
        violations = lint_nondirective(prompt, positive, negative)
        if violations:
            dropped.append(DroppedPrompt(level=prompt.level.value, text=prompt.text,
                                         provenance=prompt.provenance, violations=violations))
            continue
        descriptive.append(prompt)

    # trim later prompts of the over-represented valence until balanced
    while check_descriptive_balance(descriptive):
        pos = [p for p in descriptive if p.valence is Valence.POSITIVE]
        neg = [p for p in descriptive if p.valence is Valence.NEGATIVE]
        excess = pos[-1] if len(pos) > len(neg) else neg[-1]
        descriptive.remove(excess)
        dropped.append(DroppedPrompt(level=excess.level.value, text=excess.text,
                                     provenance=excess.provenance,
                                     violations=["dropped to balance descriptive valence counts"]))

    prompt_set = PromptSet(declarative=declarative, interpretive=interpretive,
                           conceptual=conceptual, descriptive=descriptive,
                           concept_slots=concept_slots, attitude_followup=attitude_t)
    validate_prompt_set(prompt_set, positive, negative)
    return PromptSetBuild(prompt_set=prompt_set, dropped=dropped)


def validate_prompt_set(ps: PromptSet,
                        positive: frozenset[str] | None = None,
                        negative: frozenset[str] | None = None) -> None:
    """Structural invariants; raises PromptSetError on violation."""
    if not ps.declarative:
        raise PromptSetError("prompt set needs at least one declarative prompt")
    if not ps.interpretive:
        raise PromptSetError("prompt set needs at least one interpretive prompt")
    if not ps.descriptive:
        raise PromptSetError("prompt set needs at least one descriptive prompt")
    if not ps.conceptual:
        raise PromptSetError("prompt set needs at least one conceptual prompt")
    if len(ps.conceptual) != len(ps.concept_slots):
        raise PromptSetError("one conceptual prompt per concept slot required")
    for prompt in ps.all_prompts():
        violations = lint_nondirective(prompt, positive, negative)
        if violations:
            raise PromptSetError(f"lint violation in emitted prompt {prompt.text!r}: {violations}")
    problems = check_descriptive_balance(ps.descriptive)
    if problems:
        raise PromptSetError(problems[0])


# -- serialization -------------------------------------------------------------

def _prompt_to_dict(p: Prompt) -> dict:
    return {
        "level": p.level.value,
        "text": p.text,
        "slot_values": p.slot_values,
        "provenance": p.provenance,
        "valence": p.valence.value if p.valence else None,
    }


def _prompt_from_dict(d: dict) -> Prompt:
    return Prompt(
        level=PromptLevel(d["level"]),
        text=d["text"],
        slot_values=dict(d.get("slot_values", {})),
        provenance=d.get("provenance", ""),
        valence=Valence(d["valence"]) if d.get("valence") else None,
    )


def prompt_set_to_dict(ps: PromptSet) -> dict:
    return {
        "concept_slots": ps.concept_slots,
        "attitude_followup": {
            "level": ps.attitude_followup.level.value,
            "pattern": ps.attitude_followup.pattern,
            "slots": list(ps.attitude_followup.slots),
        },
        "prompts": {
            "declarative": [_prompt_to_dict(p) for p in ps.declarative],
            "interpretive": [_prompt_to_dict(p) for p in ps.interpretive],
            "conceptual": [_prompt_to_dict(p) for p in ps.conceptual],
            "descriptive": [_prompt_to_dict(p) for p in ps.descriptive],
        },
    }


def prompt_set_from_dict(doc: dict) -> PromptSet:
    groups = doc["prompts"]
    att = doc["attitude_followup"]
    return PromptSet(
        declarative=[_prompt_from_dict(d) for d in groups["declarative"]],
        interpretive=[_prompt_from_dict(d) for d in groups["interpretive"]],
        conceptual=[_prompt_from_dict(d) for d in groups["conceptual"]],
        descriptive=[_prompt_from_dict(d) for d in groups["descriptive"]],
        concept_slots=list(doc["concept_slots"]),
        attitude_followup=PromptTemplate(level=PromptLevel(att["level"]),
                                         pattern=att["pattern"], slots=tuple(att["slots"])),
    )


def save_prompt_set(ps: PromptSet, path: str | Path) -> None:
    Path(path).write_text(json.dumps(prompt_set_to_dict(ps), indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def load_prompt_set(path: str | Path) -> PromptSet:
    return prompt_set_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
