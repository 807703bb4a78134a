"""Versioned HTTP surface over the engine.

All bodies are JSON. Parse failures come back as 422 with diagnostics,
state preconditions (inactive problem, missing snapshot) as 409. When an
instructor token is configured, activation and manual recluster require it.
"""

from __future__ import annotations

from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from pydantic import BaseModel

from ..cluster import clusters_flat_text, forcegraph_dict, snapshot_to_dict
from ..hints import hintset_to_dict
from .engine import (
    Engine, NoSnapshot, NotEnoughAttempts, ParseFailed, ProblemInactive,
)


class SubmissionIn(BaseModel):
    author: str = "anonymous"
    source: str
    correct: bool
    marks: Optional[float] = None
    id: Optional[str] = None


class CorrectionsIn(BaseModel):
    source: str
    author: Optional[str] = None


class ActivationIn(BaseModel):
    active: bool


def create_app(engine: Engine) -> FastAPI:
    app = FastAPI(title="ctutor", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )
    app.state.engine = engine

    def instructor_only(request: Request) -> Optional[JSONResponse]:
        token = engine.config.instructor_token
        if token and request.headers.get("X-Instructor-Token") != token:
            return JSONResponse({"error": "instructor token required"}, status_code=401)
        return None

    @app.post("/v1/problems/{pid}/submissions")
    def submit(pid: str, body: SubmissionIn):
        sub_id, diagnostics = engine.ingest(
            pid, body.author, body.source, body.correct, body.marks,
            submission_id=body.id,
        )
        return {"submission_id": sub_id, "diagnostics": diagnostics}

    @app.post("/v1/problems/{pid}/corrections")
    def corrections(pid: str, body: CorrectionsIn):
        try:
            hintset = engine.corrections(pid, body.source, body.author)
        except ProblemInactive:
            return JSONResponse({"error": "problem not active"}, status_code=409)
        except NoSnapshot:
            return JSONResponse({"error": "no snapshot yet"}, status_code=409)
        except NotEnoughAttempts as err:
            return JSONResponse(
                {"error": "not enough attempts", "have": err.have, "need": err.need},
                status_code=403,
            )
        except ParseFailed as err:
            return JSONResponse({"diagnostics": err.diagnostics}, status_code=422)
        return hintset_to_dict(hintset)

    @app.post("/v1/problems/{pid}/recluster")
    def recluster(pid: str, request: Request):
        denied = instructor_only(request)
        if denied:
            return denied
        engine.drain(pid)
        snapshot = engine.recluster(pid)
        return snapshot_to_dict(snapshot)

    @app.get("/v1/problems/{pid}/clusters")
    def clusters(pid: str):
        snap = engine.snapshot(pid)
        if snap is None:
            return JSONResponse({"error": "no snapshot yet"}, status_code=409)
        return PlainTextResponse(clusters_flat_text(snap))

    @app.get("/v1/problems/{pid}/clusters.json")
    def clusters_json(pid: str):
        snap = engine.snapshot(pid)
        if snap is None:
            return JSONResponse({"error": "no snapshot yet"}, status_code=409)
        return snapshot_to_dict(snap)

    @app.get("/v1/problems/{pid}/dendrogram")
    def dendrogram(pid: str):
        try:
            return engine.dendrogram(pid)
        except NoSnapshot:
            return JSONResponse({"error": "no snapshot yet"}, status_code=409)

    @app.get("/v1/problems/{pid}/forcegraph")
    def forcegraph(pid: str):
        snap = engine.snapshot(pid)
        if snap is None:
            return JSONResponse({"error": "no snapshot yet"}, status_code=409)
        return forcegraph_dict(engine.matrix(pid), snap)

    @app.get("/v1/problems/{pid}/submissions/{sid}/linear")
    def linear_view(pid: str, sid: str, request: Request):
        # normalized token view for the explorer's node inspection
        denied = instructor_only(request)
        if denied:
            return denied
        sub = engine.store.get_submission(sid)
        if sub is None or sub.problem_id != pid:
            return JSONResponse({"error": "unknown submission"}, status_code=404)
        return {"submission_id": sid, "linear": sub.linear_text,
                "parsed": sub.parsed, "correct": sub.correct}

    @app.get("/v1/problems/{pid}/variance")
    def variance(pid: str):
        try:
            return engine.evaluate_variance(pid)
        except NoSnapshot:
            return JSONResponse({"error": "no snapshot yet"}, status_code=409)

    @app.put("/v1/problems/{pid}/activation")
    def activation(pid: str, body: ActivationIn, request: Request):
        denied = instructor_only(request)
        if denied:
            return denied
        engine.store.set_active(pid, body.active)
        return {"problem_id": pid, "active": body.active}

    @app.get("/v1/health")
    def health():
        return {"status": "ok", "problems": engine.store.problems()}

    return app
