"""HTTP wire API for the conversational survey engine.

JSON over HTTP/1.1: POST /sessions, POST /sessions/{id}/messages,
GET /sessions/{id}/transcript, GET /sessions/{id}/indicators, GET /health.
Unknown ids map to 404, messages to a closed session to 409.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .errors import SessionClosed, UnknownPromptSet, UnknownSession
from .prompts import PromptSet, load_prompt_set
from .resources import default_prompt_set_path
from .store import SessionStore


class CreateSessionRequest(BaseModel):
    prompt_set_id: str = "default"


class SessionCreated(BaseModel):
    session_id: str
    agent_text: str
    phase: str


class MessageRequest(BaseModel):
    text: str = Field(min_length=1)
    idempotency_key: str | None = None


class MessageReply(BaseModel):
    agent_reply: str
    phase: str
    session_complete: bool


class IntentModel(BaseModel):
    label: str
    score: int


class TurnModel(BaseModel):
    index: int
    speaker: str
    text: str
    phase: str
    intent: IntentModel | None = None
    timestamp: float
    provenance: str = ""


class TranscriptResponse(BaseModel):
    session_id: str
    turns: list[TurnModel]


class IndicatorsResponse(BaseModel):
    session_id: str
    turn_count: int
    valence_sequence: list[str]
    valence_transitions: dict[str, int]
    mean_response_tokens: float
    followup_count: int
    ending: str


class HealthResponse(BaseModel):
    status: str = "ok"


def load_prompt_sets(paths: list[str | Path] | None = None) -> dict[str, PromptSet]:
    """Registry keyed by file stem; the first entry is aliased 'default'."""
    paths = list(paths or [])
    if not paths:
        paths = [default_prompt_set_path()]
    registry: dict[str, PromptSet] = {}
    for i, path in enumerate(paths):
        prompt_set = load_prompt_set(path)
        if i == 0:
            registry["default"] = prompt_set
        registry[Path(path).stem] = prompt_set
    return registry


def create_app(store: SessionStore, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="trustconv survey service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse()

    @app.post("/sessions", response_model=SessionCreated)
    def create_session(req: CreateSessionRequest) -> SessionCreated:
        try:
            session, opening = store.create_session(req.prompt_set_id)
        except UnknownPromptSet as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return SessionCreated(session_id=session.session_id,
                              agent_text=opening.text,
                              phase=session.phase.encode())

    @app.post("/sessions/{session_id}/messages", response_model=MessageReply)
    def post_message(session_id: str, req: MessageRequest) -> MessageReply:
        try:
            result = store.post_message(session_id, req.text,
                                        idempotency_key=req.idempotency_key)
        except UnknownSession as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except SessionClosed as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        return MessageReply(agent_reply=result.agent_text, phase=result.phase,
                            session_complete=result.session_complete)

    @app.get("/sessions/{session_id}/transcript", response_model=TranscriptResponse)
    def get_transcript(session_id: str) -> TranscriptResponse:
        try:
            turns = store.transcript(session_id)
        except UnknownSession as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return TranscriptResponse(
            session_id=session_id,
            turns=[
                TurnModel(
                    index=i,
                    speaker=t.speaker.value,
                    text=t.text,
                    phase=t.phase.encode(),
                    intent=None if t.intent is None else IntentModel(
                        label=t.intent.label.value, score=t.intent.score),
                    timestamp=t.timestamp,
                    provenance=t.provenance,
                )
                for i, t in enumerate(turns)
            ],
        )

    @app.get("/sessions/{session_id}/indicators", response_model=IndicatorsResponse)
    def get_indicators(session_id: str) -> IndicatorsResponse:
        try:
            ind = store.indicators(session_id)
        except UnknownSession as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return IndicatorsResponse(
            session_id=session_id,
            turn_count=ind.turn_count,
            valence_sequence=[label.value for label in ind.valence_sequence],
            valence_transitions={f"{a}->{b}": n for (a, b), n in sorted(ind.valence_transitions.items())},
            mean_response_tokens=ind.mean_response_tokens,
            followup_count=ind.followup_count,
            ending=ind.ending.value,
        )

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="webchat")

    return app
