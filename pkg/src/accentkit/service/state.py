"""Immutable dataset snapshot served by the stats service.

The snapshot is loaded once at startup and never mutated in place; every
query runs against the same manifest, predictions, and region config.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import corpus, georegion
from ..corpus import Manifest
from ..georegion import Coordinate, RegionSet

DEFAULT_HEATMAP_CELL = 1.0


def heatmap_bins(
    predictions: dict[str, Coordinate], cell: float
) -> list[tuple[float, float, int]]:
    """Counts of predictions per cell x cell grid square, keyed by the
    square's lower-left corner, sorted by (lat, lon)."""
    if not (cell > 0.0):
        raise ValueError(f"cell size must be positive, got {cell}")
    if not predictions:
        return []
    lats = np.array([c.lat for c in predictions.values()])
    lons = np.array([c.lon for c in predictions.values()])
    bin_lats = np.floor(lats / cell) * cell + 0.0
    bin_lons = np.floor(lons / cell) * cell + 0.0
    counts = Counter(zip(bin_lats.tolist(), bin_lons.tolist()))
    return [(lat, lon, n) for (lat, lon), n in sorted(counts.items())]


@dataclass(frozen=True)
class ServiceState:
    manifest: Manifest
    predictions: dict[str, Coordinate]
    regions: RegionSet
    region_config_doc: dict
    aliases: dict[str, str] | None
    reference_labels: dict[str, str] = field(init=False)
    default_heatmap: list = field(init=False)

    def __post_init__(self) -> None:
        reference = {
            r.utt_id: r.self_accent
            for r in self.manifest.records
            if r.self_accent.strip()
        }
        object.__setattr__(self, "reference_labels", reference)
        object.__setattr__(
            self, "default_heatmap", heatmap_bins(self.predictions, DEFAULT_HEATMAP_CELL)
        )

    def query(self, regions: RegionSet) -> dict[str, dict]:
        """Stateless what-if evaluation of a region config against the
        snapshot: UNLABELED selection, per-accent stats, and precision of
        the discovered labels against the self-reported ones."""
        selection = corpus.select(
            self.manifest, self.predictions, regions, corpus.Strategy.UNLABELED
        )
        accent_stats = corpus.stats(selection, self.manifest)
        precision = corpus.label_precision(selection, self.reference_labels)
        return {
            accent: {
                "hours": s.hours,
                "n_utterances": s.n_utterances,
                "n_speakers": s.n_speakers,
                "precision_vs_self": precision.get(accent),
            }
            for accent, s in accent_stats.items()
        }

    def heatmap(self, cell: float) -> list[tuple[float, float, int]]:
        if cell == DEFAULT_HEATMAP_CELL:
            return self.default_heatmap
        return heatmap_bins(self.predictions, cell)


def load_state(
    manifest_path: str | Path,
    geo_path: str | Path,
    regions_path: str | Path,
    aliases_path: str | Path | None = None,
) -> ServiceState:
    manifest = corpus.load_manifest(manifest_path)
    predictions = corpus.load_geo_predictions(geo_path)
    doc = json.loads(Path(regions_path).read_text("utf-8"))
    regions = georegion.regions_from_mapping(doc)
    aliases = None
    if aliases_path is not None:
        aliases = json.loads(Path(aliases_path).read_text("utf-8"))
        if not isinstance(aliases, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in aliases.items()
        ):
            raise ValueError("alias file must be a JSON object mapping strings to strings")
    return ServiceState(
        manifest=manifest,
        predictions=predictions,
        regions=regions,
        region_config_doc=doc,
        aliases=aliases,
    )
