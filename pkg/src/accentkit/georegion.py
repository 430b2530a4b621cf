"""Geographic accent regions: bounding boxes, membership tests, label assignment.

A region is a named union of lat/lon bounding boxes. Latitude intervals are
closed on both ends; longitude intervals are half-open [west, east) so that
abutting boxes tile the sphere without double counting. A box whose west edge
is numerically greater than its east edge wraps across the antimeridian.
Region order inside a RegionSet is the ambiguity-resolution priority: when
boxes overlap, a point belongs to the first region that contains it.
"""

from __future__ import annotations

import importlib.resources
import json
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

__all__ = [
    "Assignment",
    "BoundingBox",
    "Coordinate",
    "Region",
    "RegionSet",
    "assign",
    "default_regions",
    "first_match_indices",
    "normalize_lon",
    "parse_regions",
    "region_mask",
    "regions_from_mapping",
]


def normalize_lon(lon: float) -> float:
    """Map any finite longitude into [-180, +180). Idempotent."""
    y = (lon + 180.0) % 360.0 - 180.0
    # Float rounding near the seam can land exactly on +180.
    return -180.0 if y == 180.0 else y


@dataclass(frozen=True)
class Coordinate:
    """A geographic point. Longitude is normalized on construction."""

    lat: float
    lon: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.lat) or not math.isfinite(self.lon):
            raise ValueError(f"coordinate must be finite, got ({self.lat}, {self.lon})")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude {self.lat} out of range [-90, 90]")
        object.__setattr__(self, "lon", normalize_lon(self.lon))


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned lat/lon box; lon_west > lon_east means antimeridian wrap."""

    lat_min: float
    lat_max: float
    lon_west: float
    lon_east: float

    def __post_init__(self) -> None:
        for name in ("lat_min", "lat_max", "lon_west", "lon_east"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
                raise ValueError(f"{name} must be a finite number, got {v!r}")
            object.__setattr__(self, name, float(v))
        if not -90.0 <= self.lat_min <= 90.0:
            raise ValueError(f"lat_min {self.lat_min} out of range [-90, 90]")
        if not -90.0 <= self.lat_max <= 90.0:
            raise ValueError(f"lat_max {self.lat_max} out of range [-90, 90]")
        if self.lat_min > self.lat_max:
            raise ValueError(f"lat_min {self.lat_min} exceeds lat_max {self.lat_max}")
        object.__setattr__(self, "lon_west", normalize_lon(self.lon_west))
        object.__setattr__(self, "lon_east", normalize_lon(self.lon_east))

    def contains(self, coord: Coordinate) -> bool:
        """Closed latitude interval, half-open [west, east) longitude interval."""
        if not self.lat_min <= coord.lat <= self.lat_max:
            return False
        if self.lon_west <= self.lon_east:
            return self.lon_west <= coord.lon < self.lon_east
        return coord.lon >= self.lon_west or coord.lon < self.lon_east


@dataclass(frozen=True)
class Region:
    """A named accent region: the union of one or more boxes."""

    accent: str
    boxes: tuple[BoundingBox, ...]

    def __post_init__(self) -> None:
        if not self.accent.strip():
            raise ValueError("region accent label must be non-empty")
        if not self.boxes:
            raise ValueError(f"region {self.accent!r} has no boxes")

    def contains(self, coord: Coordinate) -> bool:
        return any(box.contains(coord) for box in self.boxes)


@dataclass(frozen=True)
class Assignment:
    """Result of assigning a point: first-priority accent plus every match."""

    accent: str | None
    all_matches: tuple[str, ...]


@dataclass(frozen=True)
class RegionSet:
    """Ordered regions with unique accent labels; order is match priority."""

    regions: tuple[Region, ...]
    _by_key: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        by_key: dict[str, Region] = {}
        for region in self.regions:
            key = region.accent.strip().casefold()
            if key in by_key:
                raise ValueError(f"duplicate accent label {region.accent!r}")
            by_key[key] = region
        object.__setattr__(self, "_by_key", by_key)

    def lookup(self, label: str, aliases: Mapping[str, str] | None = None) -> Region | None:
        """Resolve a self-reported label to a region.

        Matching is case-insensitive after trimming. The optional alias table
        maps free-form label strings to region accent names; an alias that
        points at an accent absent from this set is a configuration error.
        """
        key = label.strip().casefold()
        if aliases:
            for alias, target in aliases.items():
                if alias.strip().casefold() == key:
                    region = self._by_key.get(target.strip().casefold())
                    if region is None:
                        raise ValueError(
                            f"alias {alias!r} points at unknown region {target!r}"
                        )
                    return region
        return self._by_key.get(key)


def assign(regions: RegionSet, coord: Coordinate) -> Assignment:
    """Assign a point to the first region containing it, recording all matches."""
    matches = tuple(r.accent for r in regions.regions if r.contains(coord))
    return Assignment(matches[0] if matches else None, matches)


def region_mask(boxes: Sequence[BoundingBox], lats: np.ndarray, lons: np.ndarray) -> np.ndarray:
    """Vectorized union membership over boxes; identical to the scalar test."""
    out = np.zeros(lats.shape, dtype=bool)
    for box in boxes:
        m = (lats >= box.lat_min) & (lats <= box.lat_max)
        if box.lon_west <= box.lon_east:
            m &= (lons >= box.lon_west) & (lons < box.lon_east)
        else:
            m &= (lons >= box.lon_west) | (lons < box.lon_east)
        out |= m
    return out


def first_match_indices(regions: RegionSet, lats: np.ndarray, lons: np.ndarray) -> np.ndarray:
    """Vectorized first-match assignment; -1 where no region contains the point."""
    out = np.full(lats.shape, -1, dtype=np.int64)
    for i, region in enumerate(regions.regions):
        unclaimed = out == -1
        if not unclaimed.any():
            break
        m = region_mask(region.boxes, lats, lons) & unclaimed
        out[m] = i
    return out


def _require_number(value: object, path: str, accent: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ValueError(f"{path}: expected a number, got {value!r} (accent {accent!r})")
    if not math.isfinite(value):
        raise ValueError(f"{path}: value {value!r} is not finite (accent {accent!r})")
    return float(value)


def regions_from_mapping(doc: object) -> RegionSet:
    """Build a RegionSet from parsed JSON, validating shape and ranges.

    Error messages name the offending accent and carry the full field path,
    e.g. "regions[2].boxes[0].lat_min".
    """
    if not isinstance(doc, dict) or "regions" not in doc:
        raise ValueError('region config must be an object with a "regions" list')
    raw_regions = doc["regions"]
    if not isinstance(raw_regions, list):
        raise ValueError('"regions" must be a list')
    regions: list[Region] = []
    for i, raw in enumerate(raw_regions):
        path = f"regions[{i}]"
        if not isinstance(raw, dict):
            raise ValueError(f"{path}: expected an object")
        accent = raw.get("accent")
        if not isinstance(accent, str) or not accent.strip():
            raise ValueError(f"{path}.accent: must be a non-empty string")
        raw_boxes = raw.get("boxes")
        if not isinstance(raw_boxes, list) or not raw_boxes:
            raise ValueError(f"{path}.boxes: must be a non-empty list (accent {accent!r})")
        boxes: list[BoundingBox] = []
        for j, rb in enumerate(raw_boxes):
            bpath = f"{path}.boxes[{j}]"
            if not isinstance(rb, dict):
                raise ValueError(f"{bpath}: expected an object (accent {accent!r})")
            vals = {}
            for name in ("lat_min", "lat_max", "lon_west", "lon_east"):
                if name not in rb:
                    raise ValueError(f"{bpath}.{name}: missing (accent {accent!r})")
                vals[name] = _require_number(rb[name], f"{bpath}.{name}", accent)
            if not -90.0 <= vals["lat_min"] <= 90.0:
                raise ValueError(
                    f"{bpath}.lat_min: {vals['lat_min']} out of range [-90, 90] (accent {accent!r})"
                )
            if not -90.0 <= vals["lat_max"] <= 90.0:
                raise ValueError(
                    f"{bpath}.lat_max: {vals['lat_max']} out of range [-90, 90] (accent {accent!r})"
                )
            if vals["lat_min"] > vals["lat_max"]:
                raise ValueError(
                    f"{bpath}.lat_min: {vals['lat_min']} exceeds lat_max "
                    f"{vals['lat_max']} (accent {accent!r})"
                )
            boxes.append(BoundingBox(**vals))
        regions.append(Region(accent, tuple(boxes)))
    return RegionSet(tuple(regions))


def parse_regions(text: str) -> RegionSet:
    """Parse a region config JSON document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise ValueError(f"region config is not valid JSON: {e}") from e
    return regions_from_mapping(doc)


def default_regions() -> RegionSet:
    """The bundled illustrative 12-accent region config."""
    text = importlib.resources.files("accentkit.data").joinpath("regions.json").read_text("utf-8")
    return parse_regions(text)
