"""HTTP facade over the library: partition geometry, estimates, bounds, and
small MSE runs as JSON, plus the static explorer UI.

Every numeric field in a response comes straight from the corresponding
library call; handlers validate, delegate, and serialise. Responses are pure
functions of the query, so they carry a public cache header. Validation
failures return 400 with machine-readable reasons (422 is reserved for
degenerate geometry and missing cells).
"""

from __future__ import annotations

import json
import math
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field, ValidationError, model_validator

from .errors import CellNotFound, DegenerateArrangement
from .experiments import mse_monte_carlo
from .geometry import CameraArray, Projection, snapshot
from .localise import (
    point_bound,
    reconstruct_cell_centroid,
    reconstruct_least_squares,
    reconstruct_two_view_snapshot,
    worst_case_bound,
)
from .partition import build_partition, partition_to_dict

CACHE_HEADER = {"Cache-Control": "public, max-age=3600"}

FRONTEND_DIST = Path(__file__).resolve().parents[2] / "frontend" / "dist"


class ArrayParams(BaseModel):
    """Validated camera-array request with service guardrails."""

    m: int = Field(ge=2, le=64)
    n: int = Field(ge=1, le=16)
    r: float = Field(default=1.0, gt=0, le=10.0)
    kind: str = Field(default="orth", pattern="^(orth|persp)$")
    f: float | None = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _focal_rules(self):
        if self.kind == "persp":
            if self.f is None:
                raise ValueError("kind=persp requires f")
            if self.f > 100.0 * self.r:
                raise ValueError("f must be at most 100*r")
        return self

    def to_array(self) -> CameraArray:
        proj = (
            Projection.perspective(self.f)
            if self.kind == "persp"
            else Projection.orthogonal()
        )
        return CameraArray(m=self.m, r=self.r, n=self.n, projection=proj)


class EstimateParams(ArrayParams):
    x: float
    y: float
    estimator: str = Field(default="centroid", pattern="^(centroid|lsq|twoview)$")


class MseParams(ArrayParams):
    samples: int = Field(default=10_000, ge=100, le=100_000)
    seed: int = Field(default=0)
    estimator: str = Field(default="centroid", pattern="^(centroid|lsq|twoview)$")


def _validation_failure(exc: ValidationError) -> JSONResponse:
    reasons = [
        {"field": ".".join(str(p) for p in err["loc"]), "reason": err["msg"]}
        for err in exc.errors()
    ]
    return JSONResponse(status_code=400, content={"error": reasons})


def _bad_request(message: str) -> JSONResponse:
    return JSONResponse(status_code=400, content={"error": message})


def create_app(frontend_dir: Path | None = None) -> FastAPI:
    app = FastAPI(title="camring explorer")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    @app.exception_handler(DegenerateArrangement)
    async def _degenerate(request: Request, exc: DegenerateArrangement):
        return JSONResponse(status_code=422, content={"error": str(exc)})

    @app.exception_handler(CellNotFound)
    async def _no_cell(request: Request, exc: CellNotFound):
        return JSONResponse(status_code=422, content={"error": str(exc)})

    @app.get("/api/partition")
    def api_partition(request: Request):
        try:
            params = ArrayParams(**request.query_params)
        except ValidationError as exc:
            return _validation_failure(exc)
        part = build_partition(params.to_array())
        body = json.dumps(partition_to_dict(part))
        return Response(
            content=body, media_type="application/json", headers=CACHE_HEADER
        )

    @app.get("/api/estimate")
    def api_estimate(request: Request):
        try:
            params = EstimateParams(**request.query_params)
        except ValidationError as exc:
            return _validation_failure(exc)
        array = params.to_array()
        p = (params.x, params.y)
        if math.hypot(*p) > array.r * (1.0 - 1e-9):
            return _bad_request("probe point must lie inside the disc")
        snap = snapshot(array, p)
        part = build_partition(array)
        if params.estimator == "centroid":
            est = reconstruct_cell_centroid(snap, part)
        elif params.estimator == "lsq":
            est = reconstruct_least_squares(snap, array)
        else:
            est = reconstruct_two_view_snapshot(snap, array)
        err = math.hypot(est.x - p[0], est.y - p[1])
        central = part.central_radius
        body = {
            "snapshot": {
                "indices": list(snap.indices),
                "centers": list(snap.centers),
            },
            "estimate": [est.x, est.y],
            "error": err,
            "bound": {
                "worst_case": worst_case_bound(array.m, array.r),
                "point": point_bound(p, array.m),
            },
            "central_radius": central,
            "inside_central_circle": math.hypot(*p) < central,
        }
        return JSONResponse(content=body, headers=CACHE_HEADER)

    @app.get("/api/mse")
    def api_mse(request: Request):
        try:
            params = MseParams(**request.query_params)
        except ValidationError as exc:
            return _validation_failure(exc)
        array = params.to_array()
        res = mse_monte_carlo(
            array,
            estimator=params.estimator,
            samples=params.samples,
            seed=params.seed,
        )
        body = {
            "m": params.m,
            "kind": params.kind,
            "mse": res.mse,
            "stderr": res.stderr,
            "samples": params.samples - res.excluded,
        }
        return JSONResponse(content=body, headers=CACHE_HEADER)

    static_dir = frontend_dir if frontend_dir is not None else FRONTEND_DIST
    if static_dir.is_dir():
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
