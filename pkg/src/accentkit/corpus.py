"""Corpus manifests, label-discovery selection, batching, augmentation plans.

Selection implements three strategies over per-utterance geolocation
predictions:

    UNFILTERED  keep every self-reported label as-is
    FILTERED    keep a self-reported label only when the utterance's predicted
                coordinate falls inside that accent's own region (labels are
                kept or dropped, never rewritten)
    UNLABELED   ignore self labels entirely and assign each predicted
                coordinate to the first region that contains it

Randomized operations (balanced batches, augmentation plans) are
deterministic functions of an explicit integer seed. Augmentation draws are
keyed by (seed, utt_id) so adding or removing other utterances never
disturbs an utterance's draw.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import georegion
from .georegion import Coordinate, RegionSet

__all__ = [
    "AccentStats",
    "AugmentDecision",
    "AugmentMethod",
    "AugmentPlan",
    "EpochPlan",
    "Manifest",
    "Selection",
    "SelectionEntry",
    "SkippedReport",
    "Strategy",
    "UtteranceRecord",
    "augment_plan_to_jsonl",
    "balanced_batches",
    "epoch_plan_to_jsonl",
    "label_precision",
    "load_geo_predictions",
    "load_manifest",
    "make_augment_plan",
    "parse_geo_predictions",
    "parse_manifest",
    "parse_selection_entries",
    "select",
    "selection_to_jsonl",
    "stats",
]

MANIFEST_COLUMNS = ("utt_id", "speaker_id", "audio_path", "text", "self_accent", "duration_sec")


@dataclass(frozen=True)
class UtteranceRecord:
    utt_id: str
    speaker_id: str
    audio_path: str
    text: str
    self_accent: str  # empty string means unlabeled
    duration_sec: float


@dataclass(frozen=True)
class Manifest:
    """Parsed utterance manifest with id and speaker indexes."""

    records: tuple[UtteranceRecord, ...]
    by_utt: dict = field(init=False, repr=False, compare=False)
    by_speaker: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        by_utt: dict[str, UtteranceRecord] = {}
        by_speaker: dict[str, list[UtteranceRecord]] = {}
        for rec in self.records:
            by_utt[rec.utt_id] = rec
            by_speaker.setdefault(rec.speaker_id, []).append(rec)
        object.__setattr__(self, "by_utt", by_utt)
        object.__setattr__(self, "by_speaker", by_speaker)


def parse_manifest(text: str) -> Manifest:
    """Parse a TSV manifest. Errors carry 1-based line numbers."""
    lines = text.splitlines()
    if not lines:
        raise ValueError("manifest is empty")
    header = lines[0].rstrip("\r").split("\t")
    col = {}
    for name in MANIFEST_COLUMNS:
        if name not in header:
            raise ValueError(f"manifest header is missing column {name!r}")
        col[name] = header.index(name)
    records: list[UtteranceRecord] = []
    seen: set[str] = set()
    for lineno, raw in enumerate(lines[1:], start=2):
        raw = raw.rstrip("\r")
        if not raw.strip():
            continue
        fields = raw.split("\t")
        if len(fields) != len(header):
            raise ValueError(
                f"line {lineno}: expected {len(header)} fields, got {len(fields)}"
            )
        utt_id = fields[col["utt_id"]]
        if not utt_id:
            raise ValueError(f"line {lineno}: empty utt_id")
        if utt_id in seen:
            raise ValueError(f"line {lineno}: duplicate utt_id {utt_id!r}")
        seen.add(utt_id)
        speaker_id = fields[col["speaker_id"]]
        if not speaker_id:
            raise ValueError(f"line {lineno}: empty speaker_id")
        raw_dur = fields[col["duration_sec"]]
        try:
            duration = float(raw_dur)
        except ValueError:
            raise ValueError(f"line {lineno}: duration_sec {raw_dur!r} is not a number") from None
        if not math.isfinite(duration) or duration < 0:
            raise ValueError(f"line {lineno}: duration_sec {raw_dur!r} must be finite and >= 0")
        records.append(
            UtteranceRecord(
                utt_id=utt_id,
                speaker_id=speaker_id,
                audio_path=fields[col["audio_path"]],
                text=fields[col["text"]],
                self_accent=fields[col["self_accent"]],
                duration_sec=duration,
            )
        )
    return Manifest(tuple(records))


def load_manifest(path: str | Path) -> Manifest:
    return parse_manifest(Path(path).read_text("utf-8"))


def parse_geo_predictions(text: str) -> dict[str, Coordinate]:
    """Parse JSONL geolocation predictions: {"utt_id","lat","lon"} per line."""
    preds: dict[str, Coordinate] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as e:
            raise ValueError(f"line {lineno}: not valid JSON: {e.msg}") from None
        if not isinstance(obj, dict):
            raise ValueError(f"line {lineno}: expected a JSON object")
        utt_id = obj.get("utt_id")
        if not isinstance(utt_id, str) or not utt_id:
            raise ValueError(f"line {lineno}: utt_id must be a non-empty string")
        if utt_id in preds:
            raise ValueError(f"line {lineno}: duplicate utt_id {utt_id!r}")
        for key in ("lat", "lon"):
            v = obj.get(key)
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise ValueError(f"line {lineno}: {key} must be a number")
        try:
            preds[utt_id] = Coordinate(float(obj["lat"]), float(obj["lon"]))
        except ValueError as e:
            raise ValueError(f"line {lineno}: {e}") from None
    return preds


def load_geo_predictions(path: str | Path) -> dict[str, Coordinate]:
    return parse_geo_predictions(Path(path).read_text("utf-8"))


class Strategy(str, Enum):
    UNFILTERED = "unfiltered"
    FILTERED = "filtered"
    UNLABELED = "unlabeled"


@dataclass(frozen=True)
class SelectionEntry:
    utt_id: str
    accent: str
    self_label_used: bool
    geo_accent: str | None


@dataclass(frozen=True)
class SkippedReport:
    no_prediction: int
    no_region_for_label: int
    rejected: int


@dataclass(frozen=True)
class Selection:
    strategy: Strategy
    entries: tuple[SelectionEntry, ...]
    skipped: SkippedReport


def select(
    manifest: Manifest,
    predictions: Mapping[str, Coordinate],
    regions: RegionSet,
    strategy: Strategy,
    aliases: Mapping[str, str] | None = None,
) -> Selection:
    """Run one selection strategy over a manifest.

    Entries keep manifest order. Missing predictions and labels without a
    region are counted in the skipped report, never fatal. FILTERED checks a
    record's prediction against the self-reported accent's own boxes only;
    when a label lacks both a region and a prediction, the missing region is
    counted.
    """
    strategy = Strategy(strategy)
    if strategy is Strategy.UNFILTERED:
        entries = tuple(
            SelectionEntry(r.utt_id, r.self_accent, True, None)
            for r in manifest.records
            if r.self_accent.strip()
        )
        return Selection(strategy, entries, SkippedReport(0, 0, 0))

    if strategy is Strategy.FILTERED:
        entries_f: list[SelectionEntry] = []
        no_pred = no_region = rejected = 0
        region_cache: dict[str, georegion.Region | None] = {}
        for rec in manifest.records:
            if not rec.self_accent.strip():
                continue
            label = rec.self_accent
            if label not in region_cache:
                region_cache[label] = regions.lookup(label, aliases)
            region = region_cache[label]
            if region is None:
                no_region += 1
                continue
            coord = predictions.get(rec.utt_id)
            if coord is None:
                no_pred += 1
                continue
            if region.contains(coord):
                entries_f.append(SelectionEntry(rec.utt_id, rec.self_accent, True, region.accent))
            else:
                rejected += 1
        return Selection(strategy, tuple(entries_f), SkippedReport(no_pred, no_region, rejected))

    # UNLABELED: vectorized first-match over every predicted coordinate.
    with_pred = [r for r in manifest.records if r.utt_id in predictions]
    no_pred = len(manifest.records) - len(with_pred)
    if not with_pred:
        return Selection(strategy, (), SkippedReport(no_pred, 0, 0))
    lats = np.array([predictions[r.utt_id].lat for r in with_pred], dtype=np.float64)
    lons = np.array([predictions[r.utt_id].lon for r in with_pred], dtype=np.float64)
    match = georegion.first_match_indices(regions, lats, lons)
    entries_u: list[SelectionEntry] = []
    rejected = 0
    for rec, m in zip(with_pred, match):
        if m == -1:
            rejected += 1
        else:
            accent = regions.regions[m].accent
            entries_u.append(SelectionEntry(rec.utt_id, accent, False, accent))
    return Selection(strategy, tuple(entries_u), SkippedReport(no_pred, 0, rejected))


@dataclass(frozen=True)
class AccentStats:
    hours: float
    n_utterances: int
    n_speakers: int


def _entries_of(selection: Selection | Sequence[SelectionEntry]) -> tuple[SelectionEntry, ...]:
    if isinstance(selection, Selection):
        return selection.entries
    return tuple(selection)


def stats(
    selection: Selection | Sequence[SelectionEntry], manifest: Manifest
) -> dict[str, AccentStats]:
    """Per-accent hours, utterance count, and distinct speaker count.

    Accents with zero entries are omitted. A selection entry whose utt_id is
    not in the manifest is an error.
    """
    seconds: dict[str, float] = {}
    n_utts: dict[str, int] = {}
    speakers: dict[str, set[str]] = {}
    for entry in _entries_of(selection):
        rec = manifest.by_utt.get(entry.utt_id)
        if rec is None:
            raise ValueError(f"selection references unknown utt_id {entry.utt_id!r}")
        seconds[entry.accent] = seconds.get(entry.accent, 0.0) + rec.duration_sec
        n_utts[entry.accent] = n_utts.get(entry.accent, 0) + 1
        speakers.setdefault(entry.accent, set()).add(rec.speaker_id)
    return {
        accent: AccentStats(seconds[accent] / 3600.0, n_utts[accent], len(speakers[accent]))
        for accent in seconds
    }


def label_precision(
    found: Selection | Sequence[SelectionEntry], reference: Mapping[str, str]
) -> dict[str, float | None]:
    """Precision of discovered labels against reference labels.

    For each accent a: |assigned a with reference == a| / |assigned a having
    any reference|. None (undefined, distinct from 0.0) when no entry
    assigned to a carries a reference label.
    """
    referenced: dict[str, int] = {}
    matched: dict[str, int] = {}
    for entry in _entries_of(found):
        referenced.setdefault(entry.accent, 0)
        ref = reference.get(entry.utt_id)
        if ref is None:
            continue
        referenced[entry.accent] += 1
        if ref == entry.accent:
            matched[entry.accent] = matched.get(entry.accent, 0) + 1
    return {
        accent: (matched.get(accent, 0) / n if n else None)
        for accent, n in referenced.items()
    }


def _draw_u64(seed: int, domain: str, key: str) -> int:
    msg = f"{seed}\x1f{domain}\x1f{key}".encode("utf-8")
    return int.from_bytes(hashlib.sha256(msg).digest()[:8], "little")


@dataclass(frozen=True)
class EpochPlan:
    """One epoch of fixed-size accent-balanced batches of utt_ids."""

    batches: tuple[tuple[str, ...], ...]
    batch_size: int
    seed: int


def balanced_batches(
    selection: Selection | Sequence[SelectionEntry], batch_size: int, seed: int
) -> EpochPlan:
    """Equal per-accent representation by re-permuting smaller accents.

    Each accent contributes batch_size/A entries per batch, drawn from a
    seeded random permutation that is re-drawn and re-consumed whenever an
    accent runs out. The epoch ends when the largest accent has been
    consumed exactly once: ceil(max_count / (batch_size/A)) batches.
    """
    entries = _entries_of(selection)
    if not entries:
        raise ValueError("selection has no entries")
    by_accent: dict[str, list[str]] = {}
    for e in entries:
        by_accent.setdefault(e.accent, []).append(e.utt_id)
    accents = sorted(by_accent)
    n_accents = len(accents)
    if batch_size <= 0:
        raise ValueError(f"batch_size must be positive, got {batch_size}")
    if batch_size % n_accents:
        raise ValueError(
            f"batch_size {batch_size} is not divisible by the accent count {n_accents}"
        )
    per_accent = batch_size // n_accents
    max_count = max(len(ids) for ids in by_accent.values())
    n_batches = math.ceil(max_count / per_accent)
    need = n_batches * per_accent

    streams: dict[str, list[str]] = {}
    for accent in accents:
        ids = by_accent[accent]
        rng = np.random.default_rng([seed, _draw_u64(seed, "batches", accent)])
        stream: list[str] = []
        while len(stream) < need:
            stream.extend(ids[i] for i in rng.permutation(len(ids)))
        streams[accent] = stream[:need]

    batches = tuple(
        tuple(
            utt
            for accent in accents
            for utt in streams[accent][b * per_accent : (b + 1) * per_accent]
        )
        for b in range(n_batches)
    )
    return EpochPlan(batches, batch_size, seed)


class AugmentMethod(str, Enum):
    NONE = "none"
    KNN_VC = "knn-vc"
    PITCHSHIFT = "pitchshift"


@dataclass(frozen=True)
class AugmentDecision:
    utt_id: str
    method: AugmentMethod
    donor_speaker_id: str | None = None
    fractional_steps: float | None = None


@dataclass(frozen=True)
class AugmentPlan:
    method: AugmentMethod
    seed: int
    decisions: tuple[AugmentDecision, ...]


def make_augment_plan(
    selection: Selection | Sequence[SelectionEntry],
    method: AugmentMethod,
    donor_speakers: Sequence[str],
    seed: int,
) -> AugmentPlan:
    """Per-utterance augmentation decisions, keyed by (seed, utt_id).

    KNN_VC draws a donor speaker uniformly from the roster (roster order
    matters for reproducibility); PITCHSHIFT draws fractional steps
    uniformly from [-4, +4].
    """
    method = AugmentMethod(method)
    entries = _entries_of(selection)
    if method is AugmentMethod.KNN_VC and not donor_speakers:
        raise ValueError("KNN_VC requires a non-empty donor speaker roster")
    decisions: list[AugmentDecision] = []
    for e in entries:
        if method is AugmentMethod.NONE:
            decisions.append(AugmentDecision(e.utt_id, method))
        elif method is AugmentMethod.KNN_VC:
            u = _draw_u64(seed, "donor", e.utt_id)
            decisions.append(
                AugmentDecision(e.utt_id, method, donor_speaker_id=donor_speakers[u % len(donor_speakers)])
            )
        else:
            u = _draw_u64(seed, "steps", e.utt_id)
            steps = -4.0 + 8.0 * (u / 2.0**64)
            decisions.append(AugmentDecision(e.utt_id, method, fractional_steps=steps))
    return AugmentPlan(method, seed, tuple(decisions))


def selection_to_jsonl(selection: Selection | Sequence[SelectionEntry]) -> str:
    lines = []
    for e in _entries_of(selection):
        obj = {
            "utt_id": e.utt_id,
            "accent": e.accent,
            "self_label_used": e.self_label_used,
            "geo_accent": e.geo_accent,
        }
        lines.append(json.dumps(obj, separators=(",", ":")))
    return "\n".join(lines) + ("\n" if lines else "")


def parse_selection_entries(text: str) -> tuple[SelectionEntry, ...]:
    """Parse selection JSONL. Only utt_id and accent are required, so a
    selection file doubles as a reference-label file."""
    entries: list[SelectionEntry] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        try:
            obj = json.loads(raw)
        except json.JSONDecodeError as e:
            raise ValueError(f"line {lineno}: not valid JSON: {e.msg}") from None
        if not isinstance(obj, dict):
            raise ValueError(f"line {lineno}: expected a JSON object")
        utt_id = obj.get("utt_id")
        accent = obj.get("accent")
        if not isinstance(utt_id, str) or not isinstance(accent, str):
            raise ValueError(f"line {lineno}: utt_id and accent must be strings")
        self_used = obj.get("self_label_used", True)
        geo = obj.get("geo_accent")
        if not isinstance(self_used, bool):
            raise ValueError(f"line {lineno}: self_label_used must be a boolean")
        if geo is not None and not isinstance(geo, str):
            raise ValueError(f"line {lineno}: geo_accent must be a string or null")
        entries.append(SelectionEntry(utt_id, accent, self_used, geo))
    return tuple(entries)


def augment_plan_to_jsonl(plan: AugmentPlan) -> str:
    lines = []
    for d in plan.decisions:
        obj: dict = {"utt_id": d.utt_id, "method": d.method.value}
        if d.donor_speaker_id is not None:
            obj["donor_speaker_id"] = d.donor_speaker_id
        if d.fractional_steps is not None:
            obj["fractional_steps"] = d.fractional_steps
        lines.append(json.dumps(obj, separators=(",", ":")))
    return "\n".join(lines) + ("\n" if lines else "")


def epoch_plan_to_jsonl(plan: EpochPlan, accent_of: Mapping[str, str]) -> str:
    lines = []
    for b, batch in enumerate(plan.batches):
        for utt in batch:
            obj = {"batch": b, "utt_id": utt, "accent": accent_of[utt]}
            lines.append(json.dumps(obj, separators=(",", ":")))
    return "\n".join(lines) + ("\n" if lines else "")
