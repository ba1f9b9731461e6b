"""Session lifecycle and append-only transcript persistence.

Every mutation is appended to the session's JSONL file (one record per
turn) and fsync'd before the caller sees a reply, so reloading the
persistence root reconstructs each session to its exact pre-crash phase.
Per-session operations are serialized by a lock; distinct sessions are
fully concurrent.
"""

from __future__ import annotations

import json
import logging
import os
import secrets
import threading
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

from .dialog import (
    DEFAULT_MAX_TURNS,
    DialogPhase,
    DialogSession,
    Intent,
    IntentLabel,
    PhaseKind,
    Speaker,
    Turn,
    advance,
    extract_indicators,
)
from .errors import SessionClosed, UnknownPromptSet, UnknownSession
from .prompts import PromptSet

logger = logging.getLogger(__name__)

DATA_DIR_ENV = "TRUSTCONV_DATA_DIR"


def turn_to_record(session_id: str, index: int, turn: Turn,
                   prompt_set_id: str | None = None,
                   idempotency_key: str | None = None) -> dict:
    record = {
        "session_id": session_id,
        "index": index,
        "speaker": turn.speaker.value,
        "text": turn.text,
        "phase": turn.phase.encode(),
        "intent": None if turn.intent is None else {
            "label": turn.intent.label.value, "score": turn.intent.score,
        },
        "timestamp": turn.timestamp,
        "provenance": turn.provenance,
    }
    if prompt_set_id is not None:
        record["prompt_set_id"] = prompt_set_id
    if idempotency_key is not None:
        record["idempotency_key"] = idempotency_key
    return record


def turn_from_record(record: dict) -> Turn:
    intent = record.get("intent")
    return Turn(
        speaker=Speaker(record["speaker"]),
        text=record["text"],
        timestamp=float(record["timestamp"]),
        phase=DialogPhase.decode(record["phase"]),
        intent=None if intent is None else Intent(IntentLabel(intent["label"]), int(intent["score"])),
        provenance=record.get("provenance", ""),
    )


@dataclass
class MessageResult:
    agent_text: str
    phase: str
    session_complete: bool
    replayed: bool = False


class SessionStore:
    """Dialog sessions keyed by 128-bit hex ids, durably persisted per turn."""

    def __init__(self, root: str | Path, prompt_sets: dict[str, PromptSet],
                 max_turns: int = DEFAULT_MAX_TURNS,
                 clock: Callable[[], float] = time.time):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.prompt_sets = dict(prompt_sets)
        self.max_turns = max_turns
        self.clock = clock
        self._sessions: dict[str, DialogSession] = {}
        self._locks: dict[str, threading.Lock] = {}
        self._idempotency: dict[str, dict[str, MessageResult]] = {}
        self._registry_lock = threading.Lock()
        self._recover()

    # -- persistence ---------------------------------------------------------

    def _path(self, session_id: str) -> Path:
        return self.root / f"{session_id}.jsonl"

    def _append(self, session_id: str, records: list[dict]) -> None:
        with open(self._path(session_id), "a", encoding="utf-8") as fh:
            for record in records:
                fh.write(json.dumps(record, sort_keys=True) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def _recover(self) -> None:
        """Rebuild every session from its transcript file."""
        for path in sorted(self.root.glob("*.jsonl")):
            session_id = path.stem
            records = []
            for line in path.read_text(encoding="utf-8").splitlines():
                if line.strip():
                    records.append(json.loads(line))
            if not records:
                continue
            prompt_set_id = records[0].get("prompt_set_id", "default")
            prompt_set = self.prompt_sets.get(prompt_set_id)
            if prompt_set is None:
                logger.warning("session %s references unknown prompt set %r; skipping",
                               session_id, prompt_set_id)
                continue
            session = DialogSession(session_id=session_id, prompt_set=prompt_set,
                                    max_turns=self.max_turns, clock=self.clock)
            idempo: dict[str, MessageResult] = {}
            for i, record in enumerate(records):
                turn = turn_from_record(record)
                session.transcript.append(turn)
                if turn.speaker is Speaker.AGENT:
                    session.phase = turn.phase
                    if turn.provenance == "followup":
                        # budget was consumed by the phase that triggered it
                        if turn.phase.kind is PhaseKind.OPENING_FOLLOWUP:
                            key = DialogPhase(PhaseKind.OPENING).encode()
                        else:
                            key = DialogPhase(PhaseKind.CONCEPTUAL, turn.phase.slot).encode()
                        session.followups_used[key] = session.followups_used.get(key, 0) + 1
                    if turn.provenance.startswith("closing:"):
                        session.ending_reason = turn.provenance.split(":", 1)[1]
                key = record.get("idempotency_key")
                if key and i + 1 < len(records):
                    reply = turn_from_record(records[i + 1])
                    idempo[key] = MessageResult(
                        agent_text=reply.text, phase=reply.phase.encode(),
                        session_complete=reply.phase.kind is PhaseKind.CLOSED,
                        replayed=True,
                    )
            self._sessions[session_id] = session
            self._locks[session_id] = threading.Lock()
            self._idempotency[session_id] = idempo

    # -- session API -----------------------------------------------------------

    def create_session(self, prompt_set_id: str = "default") -> tuple[DialogSession, Turn]:
        prompt_set = self.prompt_sets.get(prompt_set_id)
        if prompt_set is None:
            raise UnknownPromptSet(f"no prompt set {prompt_set_id!r}")
        session_id = secrets.token_hex(16)
        session = DialogSession(session_id=session_id, prompt_set=prompt_set,
                                max_turns=self.max_turns, clock=self.clock)
        opening = session.start()
        with self._registry_lock:
            self._sessions[session_id] = session
            self._locks[session_id] = threading.Lock()
            self._idempotency[session_id] = {}
        self._append(session_id, [turn_to_record(session_id, 0, opening,
                                                 prompt_set_id=prompt_set_id)])
        return session, opening

    def get(self, session_id: str) -> DialogSession:
        session = self._sessions.get(session_id)
        if session is None:
            raise UnknownSession(f"no session {session_id!r}")
        return session

    def post_message(self, session_id: str, text: str,
                     idempotency_key: str | None = None) -> MessageResult:
        session = self.get(session_id)
        with self._locks[session_id]:
            if idempotency_key:
                stored = self._idempotency[session_id].get(idempotency_key)
                if stored is not None:
                    return stored
            if session.is_closed():
                raise SessionClosed(f"session {session_id} is closed")
            base = len(session.transcript)
            agent_turn = advance(session, text)
            respondent_turn = session.transcript[base]
            self._append(session_id, [
                turn_to_record(session_id, base, respondent_turn,
                               idempotency_key=idempotency_key),
                turn_to_record(session_id, base + 1, agent_turn),
            ])
            result = MessageResult(agent_text=agent_turn.text,
                                   phase=session.phase.encode(),
                                   session_complete=session.is_closed())
            if idempotency_key:
                self._idempotency[session_id][idempotency_key] = MessageResult(
                    agent_text=result.agent_text, phase=result.phase,
                    session_complete=result.session_complete, replayed=True)
            return result

    def transcript(self, session_id: str) -> list[Turn]:
        return list(self.get(session_id).transcript)

    def indicators(self, session_id: str):
        return extract_indicators(self.get(session_id))

    def session_ids(self) -> list[str]:
        return sorted(self._sessions)


def default_data_dir() -> Path:
    return Path(os.environ.get(DATA_DIR_ENV, "./trustconv_data"))
