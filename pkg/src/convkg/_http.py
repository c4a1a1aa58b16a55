"""HTTP route definitions for the chat service.

No postponed-annotation import here: FastAPI resolves handler annotations at
route registration, and stringified locals would silently bind the request
models as query parameters.
"""
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel


class SessionRequest(BaseModel):
    org_seed: int = 7


class UtteranceRequest(BaseModel):
    text: str


def create_app(store=None):
    from .service import SessionStore, chat_turn

    store = store or SessionStore()
    app = FastAPI(title="convkg chat service")

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.post("/sessions")
    def create_session(body: SessionRequest | None = None):
        seed = body.org_seed if body else 7
        session = store.create(org_seed=seed)
        return {"session_id": session.session_id, "org_seed": seed}

    @app.post("/sessions/{session_id}/utterance")
    def post_utterance(session_id: str, body: UtteranceRequest):
        try:
            session = store.get(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session")
        return chat_turn(session, body.text)

    @app.get("/sessions/{session_id}/graph")
    def get_graph(session_id: str):
        try:
            session = store.get(session_id)
        except KeyError:
            raise HTTPException(status_code=404, detail="unknown session")
        return session.graph.to_json_dict()

    return app
