"""FastAPI application exposing the curvature calculus endpoints.

Run with any ASGI server, e.g.:

    uvicorn kepinch.service.app:app
"""

from __future__ import annotations

from fastapi import FastAPI

from . import handlers, schemas

app = FastAPI(
    title="kepinch",
    description=(
        "Pointwise curvature calculus for Kähler-Einstein surfaces: "
        "closed-form sectional-curvature analysis, pinching regimes, "
        "oracles, and inequality certification."
    ),
    version="0.1.0",
)


@app.get("/healthz")
def healthz() -> dict:
    return {"status": "ok"}


@app.get("/constants", response_model=schemas.ConstantsResponse)
def constants() -> schemas.ConstantsResponse:
    return handlers.run_constants()


@app.post("/analyze", response_model=schemas.AnalyzeResponse)
def analyze(req: schemas.AnalyzeRequest) -> schemas.AnalyzeResponse:
    return handlers.run_analyze(req)


@app.post("/sweep", response_model=schemas.SweepResponse)
def sweep(req: schemas.SweepRequest) -> schemas.SweepResponse:
    return handlers.run_sweep(req)


@app.post("/average", response_model=schemas.AverageResponse)
def average(req: schemas.AverageRequest) -> schemas.AverageResponse:
    return handlers.run_average(req)


@app.post("/oracle", response_model=schemas.OracleResponse)
def oracle(req: schemas.OracleRequest) -> schemas.OracleResponse:
    return handlers.run_oracle(req)


@app.post("/certify", response_model=schemas.CertifyResponse)
def certify(req: schemas.CertifyRequest) -> schemas.CertifyResponse:
    return handlers.run_certify(req)


@app.post("/lemma-test", response_model=schemas.LemmaTestResponse)
def lemma_test(req: schemas.LemmaTestRequest) -> schemas.LemmaTestResponse:
    return handlers.run_lemma_test(req)
