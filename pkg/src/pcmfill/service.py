"""HTTP surface of the elicitation service.

JSON over HTTP, one resource per session.  All domain failures map onto
{code, message, allowed_pairs?} error bodies; sequencing violations list the
pairs that would currently be accepted.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .elicit import ElicitationSession, ReferenceData, SessionStore, create_session
from .errors import SequencingError, SessionStateError

DEFAULT_STORE = "sessions.jsonl"


class CreateSessionRequest(BaseModel):
    n: int
    item_labels: list[str] | None = None
    budget: int | None = None


class AnswerRequest(BaseModel):
    pair: tuple[int, int]
    value: float


def _error(status: int, code: str, message: str, allowed_pairs=None) -> JSONResponse:
    body = {"code": code, "message": message}
    if allowed_pairs is not None:
        body["allowed_pairs"] = [list(p) for p in allowed_pairs]
    return JSONResponse(status_code=status, content=body)


def _session_view(session: ElicitationSession, reference: ReferenceData) -> dict:
    view = session.to_dict()
    view["total"] = len(session.sequence.steps)
    view["answered"] = len(session.answers)
    view["estimate"] = session.estimate(reference).to_dict()
    return view


def create_app(store_path=DEFAULT_STORE, reference: ReferenceData | None = None,
               cors_origins=("*",)) -> FastAPI:
    reference = reference or ReferenceData.load_default()
    store = SessionStore(Path(store_path))
    app = FastAPI(title="pcmfill elicitation service")
    app.state.store = store
    app.state.reference = reference
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(SequencingError)
    async def _sequencing(request: Request, exc: SequencingError):
        return _error(409, "out_of_order", str(exc), exc.allowed_pairs)

    @app.exception_handler(SessionStateError)
    async def _state(request: Request, exc: SessionStateError):
        return _error(409, "bad_state", str(exc))

    @app.exception_handler(ValueError)
    async def _value(request: Request, exc: ValueError):
        return _error(422, "invalid", str(exc))

    def _get_session(session_id: str) -> ElicitationSession | None:
        return store.get(session_id)

    @app.post("/sessions")
    def post_session(body: CreateSessionRequest):
        session = create_session(
            body.n, item_labels=body.item_labels, budget=body.budget, reference=reference
        )
        store.add(session)
        return _session_view(session, reference)

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session = _get_session(session_id)
        if session is None:
            return _error(404, "not_found", f"no session {session_id}")
        return _session_view(session, reference)

    @app.get("/sessions/{session_id}/next")
    def get_next(session_id: str):
        session = _get_session(session_id)
        if session is None:
            return _error(404, "not_found", f"no session {session_id}")
        with store.lock(session_id):
            if session.state == "complete":
                return {"done": True}
            pair = session.next_question()
        if pair is None:
            return {"done": True}
        i, j = pair
        return {
            "done": False,
            "pair": [i, j],
            "labels": [session.item_labels[i], session.item_labels[j]],
            "step": len(session.answers) + 1,
            "total": len(session.sequence.steps),
        }

    @app.post("/sessions/{session_id}/answers")
    def post_answer(session_id: str, body: AnswerRequest):
        session = _get_session(session_id)
        if session is None:
            return _error(404, "not_found", f"no session {session_id}")
        with store.lock(session_id):
            store.record_answer(session, tuple(body.pair), body.value)
            estimate = session.estimate(reference)
        return {"state": session.state, "estimate": estimate.to_dict()}

    @app.post("/sessions/{session_id}/abandon")
    def post_abandon(session_id: str):
        session = _get_session(session_id)
        if session is None:
            return _error(404, "not_found", f"no session {session_id}")
        with store.lock(session_id):
            store.abandon(session)
            estimate = session.estimate(reference)
        return {"state": session.state, "estimate": estimate.to_dict()}

    return app


def serve(port: int = 8000, host: str = "127.0.0.1", store_path=DEFAULT_STORE,
          reference_dir=None):
    import uvicorn

    reference = (
        ReferenceData.load_dir(reference_dir) if reference_dir else ReferenceData.load_default()
    )
    app = create_app(store_path=store_path, reference=reference)
    uvicorn.run(app, host=host, port=port)
