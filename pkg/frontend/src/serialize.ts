/**
 * Region config import/export.
 *
 * Export writes the exact JSON shape the service and CLI accept, with a
 * stable key order so exporting an imported file is byte identical.  Import
 * validates shape and ranges, normalizes longitudes, and reports problems
 * with a dotted path to the offending field.
 */

import { clampLat, normalizeLon } from "./geometry.js";
import type { Box, Region, RegionConfig } from "./types.js";

export function exportRegions(config: RegionConfig): string {
  const regions = config.regions.map((region) => ({
    accent: region.accent,
    boxes: region.boxes.map((box) => ({
      lat_min: box.lat_min,
      lat_max: box.lat_max,
      lon_west: box.lon_west,
      lon_east: box.lon_east,
    })),
  }));
  return JSON.stringify({ regions }, null, 2) + "\n";
}

function fail(path: string, message: string): never {
  throw new Error(`${path}: ${message}`);
}

function requireNumber(value: unknown, path: string): number {
  if (typeof value !== "number" || !Number.isFinite(value)) {
    fail(path, "expected a finite number");
  }
  return value;
}

function parseBox(value: unknown, path: string): Box {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    fail(path, "expected an object");
  }
  const raw = value as Record<string, unknown>;
  for (const key of Object.keys(raw)) {
    if (!["lat_min", "lat_max", "lon_west", "lon_east"].includes(key)) {
      fail(`${path}.${key}`, "unknown key");
    }
  }
  const latMin = requireNumber(raw.lat_min, `${path}.lat_min`);
  const latMax = requireNumber(raw.lat_max, `${path}.lat_max`);
  const lonWest = requireNumber(raw.lon_west, `${path}.lon_west`);
  const lonEast = requireNumber(raw.lon_east, `${path}.lon_east`);
  if (latMin < -90 || latMin > 90) fail(`${path}.lat_min`, "outside [-90, 90]");
  if (latMax < -90 || latMax > 90) fail(`${path}.lat_max`, "outside [-90, 90]");
  if (latMin > latMax) fail(`${path}.lat_min`, "greater than lat_max");
  return {
    lat_min: clampLat(latMin),
    lat_max: clampLat(latMax),
    lon_west: normalizeLon(lonWest),
    lon_east: normalizeLon(lonEast),
  };
}

function parseRegion(value: unknown, path: string): Region {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    fail(path, "expected an object");
  }
  const raw = value as Record<string, unknown>;
  if (typeof raw.accent !== "string" || raw.accent.trim() === "") {
    fail(`${path}.accent`, "expected a non-empty string");
  }
  if (!Array.isArray(raw.boxes)) {
    fail(`${path}.boxes`, "expected an array");
  }
  if (raw.boxes.length === 0) {
    fail(`${path}.boxes`, "region needs at least one box");
  }
  return {
    accent: raw.accent,
    boxes: raw.boxes.map((box, i) => parseBox(box, `${path}.boxes[${i}]`)),
  };
}

export function importRegions(text: string): RegionConfig {
  let parsed: unknown;
  try {
    parsed = JSON.parse(text);
  } catch (err) {
    throw new Error(`not valid JSON: ${(err as Error).message}`);
  }
  if (typeof parsed !== "object" || parsed === null || Array.isArray(parsed)) {
    fail("$", "expected an object");
  }
  const raw = parsed as Record<string, unknown>;
  if (!Array.isArray(raw.regions)) {
    fail("regions", "expected an array");
  }
  const regions = raw.regions.map((region, i) =>
    parseRegion(region, `regions[${i}]`),
  );
  const seen = new Set<string>();
  regions.forEach((region, i) => {
    const key = region.accent.trim().toLowerCase();
    if (seen.has(key)) {
      fail(`regions[${i}].accent`, `duplicate accent ${JSON.stringify(region.accent)}`);
    }
    seen.add(key);
  });
  return { regions };
}
