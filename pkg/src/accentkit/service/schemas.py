"""Pydantic request/response models for the stats service."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict


class BoxModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    lat_min: float
    lat_max: float
    lon_west: float
    lon_east: float


class RegionModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    accent: str
    boxes: list[BoxModel]


class RegionConfigModel(BaseModel):
    """A full region configuration, also the POST /query request body."""

    model_config = ConfigDict(extra="forbid")

    regions: list[RegionModel]


class AccentQueryStats(BaseModel):
    """Per-accent what-if numbers; precision is null when undefined."""

    hours: float
    n_utterances: int
    n_speakers: int
    precision_vs_self: float | None


class HeatmapBin(BaseModel):
    lat: float
    lon: float
    count: int


class HeatmapResponse(BaseModel):
    cell: float
    bins: list[HeatmapBin]


class HealthResponse(BaseModel):
    status: str
