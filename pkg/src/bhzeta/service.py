"""FastAPI surface wrapping the pipeline.

The service owns the expensive shared state (Dwork streams, discrete-log
tables live in process-wide caches keyed by prime), so a long-running
instance amortizes them across requests.  All endpoints take the structured
input document {"matrix": [[...]], "prime": p, "group_generators": [[...]]}
plus per-operation options.
"""

from __future__ import annotations

from typing import Literal

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__, counting, fixtures, pipeline
from .errors import BhzetaError, BudgetExceededError, UnknownFixtureError


class InputDocument(BaseModel):
    matrix: list[list[int]]
    prime: int | None = None
    group_generators: list[list[int]] | None = None

    def doc(self) -> dict:
        return {"matrix": self.matrix, "prime": self.prime, "group_generators": self.group_generators}


class SupertraceRequest(InputDocument):
    precision: int | None = None
    nu_max: int = Field(default=1, ge=1, le=8)


class ZetaRequest(InputDocument):
    precision: int | None = None
    nu: int = Field(default=1, ge=1, le=4)
    nu_max: int = Field(default=3, ge=1, le=8)
    backend: Literal["padic", "exact", "both"] = "padic"
    use_orbits: bool = True


class CountRequest(InputDocument):
    nu: int = Field(default=1, ge=1, le=4)
    max_ops: int = counting.DEFAULT_MAX_OPS
    allow_slow: bool = False
    workers: int = Field(default=1, ge=1, le=64)
    smallcheck: bool = False


class MWRequest(InputDocument):
    precision: int | None = None
    max_ops: int = counting.DEFAULT_MAX_OPS
    allow_slow: bool = False


class FixtureRunRequest(BaseModel):
    id: str


def _options(req) -> pipeline.RunOptions:
    return pipeline.RunOptions(
        precision=getattr(req, "precision", None),
        nu=getattr(req, "nu", 1),
        nu_max=getattr(req, "nu_max", 1),
        backend=getattr(req, "backend", "padic"),
        use_orbits=getattr(req, "use_orbits", True),
        max_ops=getattr(req, "max_ops", counting.DEFAULT_MAX_OPS),
        allow_slow=getattr(req, "allow_slow", False),
        workers=getattr(req, "workers", 1),
    )


def create_app() -> FastAPI:
    app = FastAPI(title="bhzeta", version=__version__)

    @app.exception_handler(BhzetaError)
    async def _bhzeta_error(_, exc: BhzetaError):
        from fastapi.responses import JSONResponse

        status = 404 if isinstance(exc, UnknownFixtureError) else 422
        payload = {"code": exc.code, "message": str(exc)}
        if isinstance(exc, BudgetExceededError) and exc.estimate is not None:
            payload["estimate"] = exc.estimate
        return JSONResponse(status_code=status, content=payload)

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "version": __version__}

    @app.post("/validate")
    def validate(req: InputDocument):
        return pipeline.run_validate(req.doc())

    @app.post("/spectrum")
    def spectrum(req: InputDocument):
        return pipeline.run_spectrum(req.doc())

    @app.post("/supertrace")
    def supertrace(req: SupertraceRequest):
        return pipeline.run_supertrace(req.doc(), _options(req))

    @app.post("/zeta")
    def zeta(req: ZetaRequest):
        return pipeline.run_zeta(req.doc(), _options(req))

    @app.post("/count")
    def count(req: CountRequest):
        return pipeline.run_count(req.doc(), _options(req), nu=req.nu, smallcheck=req.smallcheck)

    @app.post("/mw")
    def mw_endpoint(req: MWRequest):
        return pipeline.run_mw(req.doc(), _options(req))

    @app.post("/weil")
    def weil(req: ZetaRequest):
        return pipeline.run_weil(req.doc(), _options(req))

    @app.get("/fixtures")
    def fixture_list():
        out = []
        for fid in fixtures.list_ids():
            fx = fixtures.load(fid)
            out.append(
                {"id": fid, "provenance": fx.provenance, "status": fx.status, "tags": list(fx.tags)}
            )
        return {"fixtures": out}

    @app.post("/fixtures/run")
    def fixture_run(req: FixtureRunRequest):
        try:
            fx = fixtures.load(req.id)
        except UnknownFixtureError as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from None
        return fixtures.run(fx).to_dict()

    return app


app = create_app()
