"""Relational conversational survey engine.

Sessions open with a declarative prompt, branch on the classified intent of
each reply (a negative or unclear opening reply earns one interpretive
follow-up), walk the conceptual slots in order with at most one follow-up
per phase, ask one descriptive question, and close. Transcripts are
append-only and strictly alternate agent/respondent after the opening turn.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from .errors import SessionClosed
from .prompts import PromptSet
from .resources import negation_words, negative_stems, positive_stems
from .textprep import tokenize

CLOSING_MESSAGE = "Thank you for sharing your thoughts. This concludes the conversation."

NEGATION_WINDOW = 3  # tokens before a valenced token that can flip it
FOLLOWUP_BUDGET = 1  # interpretive follow-ups allowed per phase
DEFAULT_MAX_TURNS = 30


class IntentLabel(str, Enum):
    POSITIVE = "positive"
    NEGATIVE = "negative"
    UNCLEAR = "unclear"


@dataclass(frozen=True)
class Intent:
    label: IntentLabel
    score: int

    @classmethod
    def from_score(cls, score: int) -> "Intent":
        if score > 0:
            return cls(IntentLabel.POSITIVE, score)
        if score < 0:
            return cls(IntentLabel.NEGATIVE, score)
        return cls(IntentLabel.UNCLEAR, 0)


@dataclass(frozen=True)
class ValenceLexicons:
    positive: frozenset[str]
    negative: frozenset[str]
    negation: frozenset[str]

    @classmethod
    def bundled(cls) -> "ValenceLexicons":
        return cls(positive=positive_stems(), negative=negative_stems(),
                   negation=negation_words())


def classify_intent(utterance: str, lexicons: ValenceLexicons | None = None) -> Intent:
    """Lexicon tally with negation flipping.

    Each token stemming into a valence lexicon contributes +/-1; a negation
    marker within the 3 preceding tokens flips that contribution. The sign
    of the total decides the label (0 is unclear).
    """
    lexicons = lexicons or ValenceLexicons.bundled()
    if not lexicons.positive or not lexicons.negative:
        raise ValueError("valence lexicons must be non-empty")
    tokens = tokenize(utterance)
    score = 0
    for idx, token in enumerate(tokens):
        if token.stem in lexicons.positive:
            value = 1
        elif token.stem in lexicons.negative:
            value = -1
        else:
            continue
        window = tokens[max(0, idx - NEGATION_WINDOW):idx]
        if any(t.stem in lexicons.negation for t in window):
            value = -value
        score += value
    return Intent.from_score(score)


class PhaseKind(str, Enum):
    OPENING = "opening"
    OPENING_FOLLOWUP = "opening_followup"
    CONCEPTUAL = "conceptual"
    CONCEPTUAL_FOLLOWUP = "conceptual_followup"
    DESCRIPTIVE = "descriptive"
    CLOSED = "closed"


@dataclass(frozen=True)
class DialogPhase:
    kind: PhaseKind
    slot: int = 0  # meaningful for the conceptual kinds

    def encode(self) -> str:
        if self.kind in (PhaseKind.CONCEPTUAL, PhaseKind.CONCEPTUAL_FOLLOWUP):
            return f"{self.kind.value}:{self.slot}"
        return self.kind.value

    @classmethod
    def decode(cls, raw: str) -> "DialogPhase":
        if ":" in raw:
            kind, slot = raw.split(":", 1)
            return cls(PhaseKind(kind), int(slot))
        return cls(PhaseKind(raw))

    def order_key(self, slot_count: int) -> int:
        """Monotone position along the phase progression."""
        if self.kind is PhaseKind.OPENING:
            return 0
        if self.kind is PhaseKind.OPENING_FOLLOWUP:
            return 1
        if self.kind is PhaseKind.CONCEPTUAL:
            return 2 + 2 * self.slot
        if self.kind is PhaseKind.CONCEPTUAL_FOLLOWUP:
            return 3 + 2 * self.slot
        if self.kind is PhaseKind.DESCRIPTIVE:
            return 2 + 2 * slot_count
        return 3 + 2 * slot_count


OPENING = DialogPhase(PhaseKind.OPENING)
CLOSED = DialogPhase(PhaseKind.CLOSED)


class Speaker(str, Enum):
    AGENT = "agent"
    RESPONDENT = "respondent"


@dataclass(frozen=True)
class Turn:
    speaker: Speaker
    text: str
    timestamp: float
    phase: DialogPhase           # phase after this turn was emitted
    intent: Intent | None = None  # respondent turns only
    provenance: str = ""          # agent turns only


@dataclass
class DialogSession:
    """Single-writer session state; distinct sessions are independent."""

    session_id: str
    prompt_set: PromptSet
    phase: DialogPhase = OPENING
    transcript: list[Turn] = field(default_factory=list)
    followups_used: dict[str, int] = field(default_factory=dict)
    max_turns: int = DEFAULT_MAX_TURNS
    ending_reason: str | None = None  # "completed" | "turn_limited" once closed
    clock: Callable[[], float] = time.time

    def start(self) -> Turn:
        """Emit the opening declarative prompt as turn 0."""
        if self.transcript:
            raise ValueError("session already started")
        opening = self.prompt_set.opening_prompt()
        turn = Turn(speaker=Speaker.AGENT, text=opening.text, timestamp=self.clock(),
                    phase=self.phase, provenance="opening")
        self.transcript.append(turn)
        return turn

    def respondent_turns(self) -> list[Turn]:
        return [t for t in self.transcript if t.speaker is Speaker.RESPONDENT]

    def is_closed(self) -> bool:
        return self.phase.kind is PhaseKind.CLOSED

    def _budget_key(self, phase: DialogPhase) -> str:
        return phase.encode()

    def _has_followup_budget(self, phase: DialogPhase) -> bool:
        return self.followups_used.get(self._budget_key(phase), 0) < FOLLOWUP_BUDGET

    def _consume_followup(self, phase: DialogPhase) -> None:
        key = self._budget_key(phase)
        self.followups_used[key] = self.followups_used.get(key, 0) + 1


def _attitude_for(intent: Intent) -> str:
    # only the negative branch instantiates the attitude follow-up
    return "dislike"


def _conceptual_or_descriptive(ps: PromptSet, slot: int) -> tuple[str, str, DialogPhase]:
    if slot < len(ps.concept_slots):
        prompt = ps.conceptual[slot]
        return prompt.text, f"conceptual:{slot}", DialogPhase(PhaseKind.CONCEPTUAL, slot)
    prompt = ps.descriptive[0]
    return prompt.text, "descriptive", DialogPhase(PhaseKind.DESCRIPTIVE)


def _natural_next(session: DialogSession, intent: Intent) -> tuple[str, str, DialogPhase, str | None]:
    """(agent text, provenance, new phase, ending reason) for the reply."""
    ps = session.prompt_set
    phase = session.phase
    kind = phase.kind

    if kind is PhaseKind.OPENING:
        if intent.label in (IntentLabel.NEGATIVE, IntentLabel.UNCLEAR) and session._has_followup_budget(phase):
            session._consume_followup(phase)
            if intent.label is IntentLabel.NEGATIVE:
                text = ps.attitude_followup.fill({"attitude": _attitude_for(intent)})
            else:
                text = ps.generic_followup().text
            return text, "followup", DialogPhase(PhaseKind.OPENING_FOLLOWUP), None
        return (*_conceptual_or_descriptive(ps, 0), None)

    if kind is PhaseKind.OPENING_FOLLOWUP:
        return (*_conceptual_or_descriptive(ps, 0), None)

    if kind is PhaseKind.CONCEPTUAL:
        if intent.label is IntentLabel.UNCLEAR and session._has_followup_budget(phase):
            session._consume_followup(phase)
            return (ps.generic_followup().text, "followup",
                    DialogPhase(PhaseKind.CONCEPTUAL_FOLLOWUP, phase.slot), None)
        return (*_conceptual_or_descriptive(ps, phase.slot + 1), None)

    if kind is PhaseKind.CONCEPTUAL_FOLLOWUP:
        return (*_conceptual_or_descriptive(ps, phase.slot + 1), None)

    if kind is PhaseKind.DESCRIPTIVE:
        return CLOSING_MESSAGE, "closing:completed", CLOSED, "completed"

    raise SessionClosed(f"session {session.session_id} is closed")


def advance(session: DialogSession, respondent_text: str,
            lexicons: ValenceLexicons | None = None) -> Turn:
    """Append the respondent turn, transition, and append + return the agent turn."""
    if session.is_closed():
        raise SessionClosed(f"session {session.session_id} is closed")
    if not session.transcript:
        raise ValueError("session not started")

    intent = classify_intent(respondent_text, lexicons)
    session.transcript.append(Turn(
        speaker=Speaker.RESPONDENT, text=respondent_text, timestamp=session.clock(),
        phase=session.phase, intent=intent,
    ))

    text, provenance, new_phase, reason = _natural_next(session, intent)
    if new_phase.kind is not PhaseKind.CLOSED and len(session.transcript) + 1 >= session.max_turns:
        text, provenance, new_phase, reason = (
            CLOSING_MESSAGE, "closing:turn_limited", CLOSED, "turn_limited")

    session.phase = new_phase
    session.ending_reason = reason
    agent_turn = Turn(speaker=Speaker.AGENT, text=text, timestamp=session.clock(),
                      phase=new_phase, provenance=provenance)
    session.transcript.append(agent_turn)
    return agent_turn


class Ending(str, Enum):
    COMPLETED = "completed"
    ABANDONED = "abandoned"
    TURN_LIMITED = "turn_limited"


@dataclass
class TrustIndicators:
    """Transcript-derived signals: turn-taking, attitude sequence, ending."""

    turn_count: int
    valence_sequence: list[IntentLabel]
    valence_transitions: dict[tuple[str, str], int]
    mean_response_tokens: float
    followup_count: int
    ending: Ending


def extract_indicators(session: DialogSession) -> TrustIndicators:
    """Deterministic tabulation over the current transcript snapshot."""
    responses = session.respondent_turns()
    sequence = [t.intent.label for t in responses if t.intent is not None]
    transitions: dict[tuple[str, str], int] = {}
    for prev, cur in zip(sequence, sequence[1:]):
        key = (prev.value, cur.value)
        transitions[key] = transitions.get(key, 0) + 1
    token_counts = [len(tokenize(t.text)) for t in responses]
    mean_tokens = sum(token_counts) / len(token_counts) if token_counts else 0.0
    followups = sum(1 for t in session.transcript
                    if t.speaker is Speaker.AGENT and t.provenance == "followup")
    if session.is_closed():
        ending = Ending.TURN_LIMITED if session.ending_reason == "turn_limited" else Ending.COMPLETED
    else:
        ending = Ending.ABANDONED
    return TrustIndicators(
        turn_count=len(responses),
        valence_sequence=sequence,
        valence_transitions=transitions,
        mean_response_tokens=mean_tokens,
        followup_count=followups,
        ending=ending,
    )
