"""HTTP surface over the pipeline.

Endpoints (JSON bodies, exact field names):
  POST /sessions                      -> {"session_id"}
  POST /sessions/{id}/messages {text} -> {"reply", "trace"}
  POST /sessions/{id}/rating {rating} -> {}            (400 outside 1..5)
  GET  /sessions/{id}/transcript      -> {"turns": [...], "rating"?}
  GET  /analytics                     -> stats table

Requests for the same session serialize on the store's per-session lock;
distinct sessions run concurrently. All models and data are read-only at
serve time.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import Body, FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .config import PipelineConfig
from .pipeline import Pipeline


def create_app(pipeline: Pipeline, static_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="ensemblechat", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    def _error(status: int, message: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": message})

    @app.post("/sessions")
    def create_session():
        session = pipeline.create_session()
        return {"session_id": session.id}

    @app.post("/sessions/{session_id}/messages")
    def post_message(session_id: str, payload: dict = Body(...)):
        text = payload.get("text")
        if not isinstance(text, str) or not text.strip():
            return _error(400, "text must be a nonempty string")
        try:
            reply, trace = pipeline.respond(session_id, text)
        except KeyError:
            return _error(404, f"unknown session {session_id}")
        return {"reply": reply, "trace": trace.to_record(session_id)}

    @app.post("/sessions/{session_id}/rating")
    def post_rating(session_id: str, payload: dict = Body(...)):
        rating = payload.get("rating")
        if not isinstance(rating, int) or isinstance(rating, bool) or not 1 <= rating <= 5:
            return _error(400, "rating must be an integer in [1, 5]")
        try:
            pipeline.rate(session_id, rating)
        except KeyError:
            return _error(404, f"unknown session {session_id}")
        return {}

    @app.get("/sessions/{session_id}/transcript")
    def get_transcript(session_id: str):
        try:
            session = pipeline.transcript(session_id)
        except KeyError:
            return _error(404, f"unknown session {session_id}")
        turns = [t.to_record(session_id) for t in pipeline.store.snapshot_turns(session)]
        body: dict = {"turns": turns}
        if session.rating is not None:
            body["rating"] = session.rating
        return body

    @app.get("/analytics")
    def get_analytics():
        return pipeline.analytics().to_dict()

    if static_dir is not None and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="console")

    return app


def serve(
    config: PipelineConfig,
    port: int,
    host: str = "127.0.0.1",
    static_dir: str | Path | None = None,
) -> None:
    """Run the HTTP service; blocks until interrupted."""
    import uvicorn

    pipeline = Pipeline(config)
    app = create_app(pipeline, static_dir=static_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")
