"""HTTP service backing the annotation UI.

Endpoints (JSON bodies):
    GET  /api/tasks/next?client=...      -> leased task or 204
    POST /api/tasks/{id}/decision        -> {binary, sentiments[], action}
    GET  /api/stats                      -> queue statistics
    GET  /api/corpus/summary             -> corpus manifest summary
The static UI bundle, when present, is served at /.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .annotation import ACTIONS, AnnotationError, AnnotationQueue, ConflictError
from .labels import SENWAVE_LABELS


class DecisionBody(BaseModel):
    action: str
    binary: str | None = None
    sentiments: list[str] = Field(default_factory=list)
    decided_by: str = "anonymous"


def create_app(queue: AnnotationQueue, corpus_summary: dict | None = None,
               static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="abuselens annotation service")

    @app.get("/api/tasks/next")
    def next_task(client: str = "anonymous"):
        task = queue.next_task(client)
        if task is None:
            return Response(status_code=204)
        return {
            **task.public_view(),
            "binary_choices": ["hinduphobic", "positive_neutral"],
            "sentiment_choices": list(SENWAVE_LABELS),
        }

    @app.post("/api/tasks/{post_id}/decision")
    def decide(post_id: str, body: DecisionBody):
        if body.action not in ACTIONS:
            raise HTTPException(status_code=422, detail=f"unknown action: {body.action}")
        try:
            task = queue.decide(
                post_id,
                action=body.action,
                binary=body.binary,
                sentiments=body.sentiments,
                decided_by=body.decided_by,
            )
        except ConflictError as exc:
            raise HTTPException(status_code=409, detail=str(exc)) from exc
        except AnnotationError as exc:
            raise HTTPException(status_code=422, detail=str(exc)) from exc
        return task.public_view()

    @app.get("/api/stats")
    def stats():
        return queue.stats()

    @app.get("/api/corpus/summary")
    def summary():
        return corpus_summary or {"total_tasks": len(queue)}

    if static_dir and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    else:
        @app.get("/")
        def index():
            return {
                "service": "abuselens annotation service",
                "endpoints": ["/api/tasks/next", "/api/tasks/{id}/decision",
                              "/api/stats", "/api/corpus/summary"],
            }

    return app
