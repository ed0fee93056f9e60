"""HTTP front end: one POST route per command, plus a health check.

Library input errors map to 422 (the request was structurally wrong) and
domain errors to 409 (the request was well formed but unsatisfiable).
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from ..errors import DomainError, InputError
from . import handlers, models


def create_app() -> FastAPI:
    app = FastAPI(title="walkgate", version="0.1.0")

    @app.exception_handler(InputError)
    async def _input_error(request: Request, exc: InputError):
        return JSONResponse(status_code=422, content={"detail": str(exc), "kind": "validation"})

    @app.exception_handler(DomainError)
    async def _domain_error(request: Request, exc: DomainError):
        return JSONResponse(status_code=409, content={"detail": str(exc), "kind": "domain"})

    @app.get("/health", response_model=models.HealthResponse)
    def health():
        return models.HealthResponse()

    @app.post("/truth-table", response_model=models.TruthTableResponse)
    def truth_table(req: models.TruthTableRequest):
        return handlers.handle_truth_table(req)

    @app.post("/evolve", response_model=models.TableResponse)
    def evolve(req: models.EvolveRequest):
        return handlers.handle_evolve(req)

    @app.post("/hom-scan", response_model=models.TableResponse)
    def hom_scan(req: models.HomScanRequest):
        return handlers.handle_hom_scan(req)

    @app.post("/bell", response_model=models.BellResponse)
    def bell(req: models.BellRequest):
        return handlers.handle_bell(req)

    @app.post("/design", response_model=models.DesignResponse)
    def design(req: models.DesignRequest):
        return handlers.handle_design(req)

    @app.post("/fidelity", response_model=models.FidelityResponse)
    def fid(req: models.FidelityRequest):
        return handlers.handle_fidelity(req)

    @app.post("/sample", response_model=models.SampleResponse)
    def sample(req: models.SampleRequest):
        return handlers.handle_sample(req)

    return app


app = create_app()
