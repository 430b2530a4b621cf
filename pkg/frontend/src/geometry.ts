/**
 * Coordinate math for the map canvas.
 *
 * Conventions mirror the service: latitudes clamp to [-90, 90], longitudes
 * normalize to [-180, 180), and a box whose lon_west is greater than its
 * lon_east wraps across the antimeridian.  Longitude intervals are half open,
 * [west, east), so west == east denotes an empty box, never the full circle.
 */

import type { Box } from "./types.js";

export type LatLon = {
  lat: number;
  lon: number;
};

export type Point = {
  x: number;
  y: number;
};

export function clampLat(lat: number): number {
  if (lat < -90) return -90;
  if (lat > 90) return 90;
  return lat;
}

/**
 * Map any finite longitude into [-180, 180).  In-range values pass through
 * bit-for-bit: the add-mod-subtract fold can disturb the last ulp of a
 * value like -8.7, and a no-op here is what keeps hand-typed bounds and
 * re-imported exports exactly as written.  Out-of-range values fold the
 * way the service does (the conditional add turns the JS remainder into a
 * true modulo), with the seam landing on -180, never +180.
 */
export function normalizeLon(lon: number): number {
  if (lon >= -180 && lon < 180) return lon;
  let y = (lon + 180) % 360;
  if (y !== 0 && y < 0) y += 360;
  y -= 180;
  return y === 180 ? -180 : y;
}

/** Equirectangular projection: lon -180..180 spans x 0..width, lat 90..-90
 * spans y 0..height (north at the top). */
export function latLonToPx(pos: LatLon, width: number, height: number): Point {
  return {
    x: ((normalizeLon(pos.lon) + 180) / 360) * width,
    y: ((90 - clampLat(pos.lat)) / 180) * height,
  };
}

export function pxToLatLon(pt: Point, width: number, height: number): LatLon {
  return {
    lat: clampLat(90 - (pt.y / height) * 180),
    lon: normalizeLon((pt.x / width) * 360 - 180),
  };
}

/**
 * Build a box from two drag corners.  Latitude order never matters.  By
 * default the box covers the shorter way around between the two longitudes;
 * with wrapEastward it runs eastward from a to b, which is how a drag that
 * should cross the antimeridian is expressed.
 */
export function boxFromCorners(a: LatLon, b: LatLon, wrapEastward = false): Box {
  const latMin = clampLat(Math.min(a.lat, b.lat));
  const latMax = clampLat(Math.max(a.lat, b.lat));
  const lonA = normalizeLon(a.lon);
  const lonB = normalizeLon(b.lon);
  let west: number;
  let east: number;
  if (wrapEastward) {
    west = lonA;
    east = lonB;
  } else {
    west = Math.min(lonA, lonB);
    east = Math.max(lonA, lonB);
  }
  return { lat_min: latMin, lat_max: latMax, lon_west: west, lon_east: east };
}

/** Same membership rule the service applies: closed in latitude, half open
 * in longitude, wrapping when lon_west > lon_east. */
export function pointInBox(box: Box, pos: LatLon): boolean {
  if (pos.lat < box.lat_min || pos.lat > box.lat_max) return false;
  if (box.lon_west > box.lon_east) {
    return pos.lon >= box.lon_west || pos.lon < box.lon_east;
  }
  return pos.lon >= box.lon_west && pos.lon < box.lon_east;
}

/** Eastward extent in degrees; wrap boxes measure across the antimeridian. */
export function boxLonSpan(box: Box): number {
  const span = box.lon_east - box.lon_west;
  return span >= 0 ? span : span + 360;
}

/**
 * Screen-space rectangles for drawing and hit testing.  A wrap box splits
 * into two rects, one ending at the right edge of the map and one starting
 * at the left edge.
 */
export function boxToRects(
  box: Box,
  width: number,
  height: number,
): { x: number; y: number; w: number; h: number }[] {
  const top = latLonToPx({ lat: box.lat_max, lon: 0 }, width, height).y;
  const bottom = latLonToPx({ lat: box.lat_min, lon: 0 }, width, height).y;
  const h = bottom - top;
  const xWest = ((box.lon_west + 180) / 360) * width;
  const xEast = ((box.lon_east + 180) / 360) * width;
  if (box.lon_west > box.lon_east) {
    return [
      { x: xWest, y: top, w: width - xWest, h },
      { x: 0, y: top, w: xEast, h },
    ];
  }
  return [{ x: xWest, y: top, w: xEast - xWest, h }];
}

/** Shift a box by whole-degree deltas.  Longitude moves wrap; latitude stops
 * at the poles without letting the box collapse past them. */
export function shiftBox(box: Box, dLat: number, dLon: number): Box {
  let latMin = box.lat_min + dLat;
  let latMax = box.lat_max + dLat;
  if (latMax > 90) {
    latMin -= latMax - 90;
    latMax = 90;
  }
  if (latMin < -90) {
    latMax += -90 - latMin;
    latMin = -90;
  }
  return {
    lat_min: clampLat(latMin),
    lat_max: clampLat(latMax),
    lon_west: normalizeLon(box.lon_west + dLon),
    lon_east: normalizeLon(box.lon_east + dLon),
  };
}
