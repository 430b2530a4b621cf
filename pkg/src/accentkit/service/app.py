"""FastAPI application exposing the dataset snapshot.

Endpoints:
    GET  /healthz          liveness probe
    GET  /regions          the loaded region config document, verbatim
    POST /query            stateless what-if stats for a candidate config
    GET  /heatmap?cell=C   grid histogram of the geolocation predictions

Malformed bodies and invalid parameters return 400 with a field path in
the detail string; unknown routes are plain 404s.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse

from ..georegion import regions_from_mapping
from .schemas import (
    AccentQueryStats,
    HealthResponse,
    HeatmapBin,
    HeatmapResponse,
    RegionConfigModel,
)
from .state import DEFAULT_HEATMAP_CELL, ServiceState


def create_app(state: ServiceState, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="accentkit stats service", version="0.1.0")

    @app.exception_handler(RequestValidationError)
    async def _validation_to_400(request: Request, exc: RequestValidationError):
        first = exc.errors()[0]
        loc = ".".join(str(x) for x in first.get("loc", ()) if x != "body")
        detail = f"{loc}: {first.get('msg', 'invalid value')}" if loc else first.get("msg", "")
        return JSONResponse(status_code=400, content={"detail": detail})

    @app.get("/healthz", response_model=HealthResponse)
    def healthz() -> HealthResponse:
        return HealthResponse(status="ok")

    @app.get("/regions")
    def regions() -> dict:
        return state.region_config_doc

    @app.post("/query", response_model=dict[str, AccentQueryStats])
    def query(body: RegionConfigModel) -> dict[str, AccentQueryStats]:
        try:
            region_set = regions_from_mapping(body.model_dump())
        except ValueError as e:
            raise HTTPException(status_code=400, detail=str(e)) from None
        return {
            accent: AccentQueryStats(**row) for accent, row in state.query(region_set).items()
        }

    @app.get("/heatmap", response_model=HeatmapResponse)
    def heatmap(cell: float = DEFAULT_HEATMAP_CELL) -> HeatmapResponse:
        try:
            bins = state.heatmap(cell)
        except ValueError as e:
            raise HTTPException(status_code=400, detail=str(e)) from None
        return HeatmapResponse(
            cell=cell, bins=[HeatmapBin(lat=lat, lon=lon, count=n) for lat, lon, n in bins]
        )

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
