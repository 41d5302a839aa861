"""Transport-agnostic client for the analysis service.

The CLI is a thin client of the service layer: with no server URL it
calls the handlers in process, with one it speaks HTTP.  Both paths move
the same pydantic request/response models, so output is byte-identical
either way.
"""

from __future__ import annotations

import httpx

from .service import handlers, schemas


class ServiceError(RuntimeError):
    """A request the service refused or a transport failure."""


class ServiceClient:
    def __init__(self, base_url: str | None = None, timeout: float = 120.0):
        self._base_url = base_url.rstrip("/") if base_url else None
        self._timeout = timeout

    def _post(self, path: str, payload: dict, model):
        try:
            resp = httpx.post(
                f"{self._base_url}{path}", json=payload, timeout=self._timeout
            )
        except httpx.HTTPError as exc:
            raise ServiceError(f"request to {path} failed: {exc}") from exc
        if resp.status_code != 200:
            raise ServiceError(f"{path} returned HTTP {resp.status_code}: {resp.text}")
        return model.model_validate(resp.json())

    def _get(self, path: str, model):
        try:
            resp = httpx.get(f"{self._base_url}{path}", timeout=self._timeout)
        except httpx.HTTPError as exc:
            raise ServiceError(f"request to {path} failed: {exc}") from exc
        if resp.status_code != 200:
            raise ServiceError(f"{path} returned HTTP {resp.status_code}: {resp.text}")
        return model.model_validate(resp.json())

    def constants(self) -> schemas.ConstantsResponse:
        if self._base_url is None:
            return handlers.run_constants()
        return self._get("/constants", schemas.ConstantsResponse)

    def analyze(self, req: schemas.AnalyzeRequest) -> schemas.AnalyzeResponse:
        if self._base_url is None:
            return handlers.run_analyze(req)
        return self._post(
            "/analyze", req.model_dump(mode="json", by_alias=True), schemas.AnalyzeResponse
        )

    def sweep(self, req: schemas.SweepRequest) -> schemas.SweepResponse:
        if self._base_url is None:
            return handlers.run_sweep(req)
        return self._post(
            "/sweep", req.model_dump(mode="json", by_alias=True), schemas.SweepResponse
        )

    def average(self, req: schemas.AverageRequest) -> schemas.AverageResponse:
        if self._base_url is None:
            return handlers.run_average(req)
        return self._post(
            "/average", req.model_dump(mode="json", by_alias=True), schemas.AverageResponse
        )

    def oracle(self, req: schemas.OracleRequest) -> schemas.OracleResponse:
        if self._base_url is None:
            return handlers.run_oracle(req)
        return self._post(
            "/oracle", req.model_dump(mode="json", by_alias=True), schemas.OracleResponse
        )

    def certify(self, req: schemas.CertifyRequest) -> schemas.CertifyResponse:
        if self._base_url is None:
            return handlers.run_certify(req)
        return self._post(
            "/certify", req.model_dump(mode="json", by_alias=True), schemas.CertifyResponse
        )

    def lemma_test(self, req: schemas.LemmaTestRequest) -> schemas.LemmaTestResponse:
        if self._base_url is None:
            return handlers.run_lemma_test(req)
        return self._post(
            "/lemma-test",
            req.model_dump(mode="json", by_alias=True),
            schemas.LemmaTestResponse,
        )
