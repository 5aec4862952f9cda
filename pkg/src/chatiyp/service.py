"""HTTP API: POST /api/ask, GET /api/health, GET /api/schema.

Shared state (graph, index, providers, config) is read-only after startup;
requests are stateless, so identical questions against a scripted provider
stack yield identical responses modulo request_id and timings.
"""

from __future__ import annotations

import time
import uuid
from dataclasses import dataclass, replace
from typing import Optional

from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import __version__
from .config import Runtime
from .generation import synthesize
from .retrieval import PipelineStageError, RetrievalConfig, retrieve

MAX_K = 50
MAX_TOP_N = 20


class AskOptions(BaseModel):
    k: Optional[int] = None
    min_rows: Optional[int] = None
    top_n: Optional[int] = None


class AskBody(BaseModel):
    question: str
    options: Optional[AskOptions] = None


@dataclass
class ServiceState:
    runtime: Optional[Runtime] = None
    ready: bool = False


def _apply_options(base: RetrievalConfig, options: Optional[AskOptions]) -> RetrievalConfig:
    if options is None:
        return base
    updates = {}
    if options.k is not None:
        updates["k"] = max(1, min(options.k, MAX_K))
    if options.min_rows is not None:
        updates["min_rows"] = max(0, options.min_rows)
    if options.top_n is not None:
        updates["top_n"] = max(1, min(options.top_n, MAX_TOP_N))
    return replace(base, **updates)


def create_app(state: ServiceState, cors_origins=("*",)) -> FastAPI:
    app = FastAPI(title="chatiyp", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.get("/api/health")
    def health():
        if not state.ready or state.runtime is None:
            return JSONResponse(status_code=503, content={"status": "loading"})
        runtime = state.runtime
        return {
            "status": "ok",
            "graph_nodes": len(runtime.graph.nodes) if runtime.graph else 0,
            "index_entries": len(runtime.index.entries) if runtime.index else 0,
            "version": __version__,
        }

    @app.get("/api/schema")
    def schema():
        if not state.ready or state.runtime is None:
            return JSONResponse(status_code=503, content={"status": "loading"})
        return state.runtime.schema.to_dict()

    @app.post("/api/ask")
    def ask(body: AskBody):
        if not state.ready or state.runtime is None:
            return JSONResponse(status_code=503, content={"status": "loading"})
        question = body.question.strip()
        if not question:
            return JSONResponse(
                status_code=400, content={"detail": "question must be non-empty"}
            )
        runtime = state.runtime
        config = _apply_options(runtime.retrieval, body.options)
        timings = {}
        try:
            started = time.monotonic()
            retrieval = retrieve(question, runtime.deps(), config)
            timings["retrieve_ms"] = (time.monotonic() - started) * 1000.0
            started = time.monotonic()
            answer = synthesize(question, retrieval, runtime.provider)
            timings["synthesize_ms"] = (time.monotonic() - started) * 1000.0
        except PipelineStageError as exc:
            return JSONResponse(
                status_code=502,
                content={"detail": {"stage": exc.stage, "error": str(exc.cause)}},
            )
        return {
            "answer": answer.text,
            "cypher": answer.refined_cypher,
            "context": [
                {"source": c.source, "text": c.text, "score": c.score}
                for c in retrieval.candidates
            ],
            "path": retrieval.path,
            "timings": timings,
            "request_id": str(uuid.uuid4()),
        }

    return app


def serve(runtime: Runtime, host: str = "127.0.0.1", port: int = 8000,
          cors_origins=("*",)) -> None:
    import uvicorn

    state = ServiceState(runtime=runtime, ready=True)
    app = create_app(state, cors_origins=cors_origins)
    uvicorn.run(app, host=host, port=port)
