/**
 * Editor state and the pure operations that advance it.
 *
 * Every edit returns a fresh state with a bumped version.  Query responses
 * and errors arrive tagged with the version that produced them; anything
 * older than the latest edit is discarded, so a slow response can never
 * overwrite stats for a newer draft.  Failures never touch the draft.
 *
 * The draft always serializes to a config the service accepts.  Since the
 * service rejects a region with no boxes, deleting the last box of an accent
 * removes the accent from the draft entirely; the accent may stay selected
 * so the next drawn box recreates it.
 */

import type { Box, QueryResponse, RegionConfig } from "./types.js";

export type EditorState = {
  draft: RegionConfig;
  selectedAccent: string | null;
  /** Bumped on every draft edit; responses carry the version they answer. */
  version: number;
  stats: QueryResponse | null;
  /** Version of the draft the current stats describe, -1 before the first. */
  statsVersion: number;
  error: string | null;
};

export function initialState(draft: RegionConfig = { regions: [] }): EditorState {
  return {
    draft,
    selectedAccent: null,
    version: 0,
    stats: null,
    statsVersion: -1,
    error: null,
  };
}

/** True while the shown stats lag behind the draft. */
export function isDirty(state: EditorState): boolean {
  return state.statsVersion !== state.version;
}

export function accentNames(state: EditorState): string[] {
  return state.draft.regions.map((region) => region.accent);
}

export function regionOf(state: EditorState, accent: string) {
  return state.draft.regions.find((region) => region.accent === accent);
}

function withDraft(state: EditorState, draft: RegionConfig): EditorState {
  return { ...state, draft, version: state.version + 1 };
}

/** Select an accent for editing.  The name need not exist in the draft yet;
 * a selected accent with no region is pending until its first box is drawn. */
export function selectAccent(state: EditorState, accent: string | null): EditorState {
  if (accent !== null && accent.trim() === "") {
    throw new Error("accent name is empty");
  }
  return { ...state, selectedAccent: accent };
}

function sameAccent(a: string, b: string): boolean {
  return a.trim().toLowerCase() === b.trim().toLowerCase();
}

function checkBox(box: Box): Box {
  for (const [key, value] of Object.entries(box)) {
    if (!Number.isFinite(value)) throw new Error(`${key} is not finite`);
  }
  if (box.lat_min < -90 || box.lat_max > 90 || box.lat_min > box.lat_max) {
    throw new Error("latitude bounds out of order or range");
  }
  if (box.lon_west < -180 || box.lon_west >= 180 || box.lon_east < -180 || box.lon_east >= 180) {
    throw new Error("longitude outside [-180, 180)");
  }
  return box;
}

/** Append a box to an accent, creating the region if this is its first box.
 * New regions go to the end of the list, which is the lowest priority. */
export function addBox(state: EditorState, accent: string, box: Box): EditorState {
  checkBox(box);
  const name = accent.trim();
  if (name === "") throw new Error("accent name is empty");
  const existing = state.draft.regions.find((r) => sameAccent(r.accent, name));
  let regions;
  if (existing === undefined) {
    regions = [...state.draft.regions, { accent: name, boxes: [box] }];
  } else {
    regions = state.draft.regions.map((r) =>
      r === existing ? { ...r, boxes: [...r.boxes, box] } : r,
    );
  }
  return withDraft(state, { regions });
}

function regionIndexOf(state: EditorState, accent: string): number {
  const idx = state.draft.regions.findIndex((r) => r.accent === accent);
  if (idx < 0) throw new Error(`no region named ${JSON.stringify(accent)}`);
  return idx;
}

export function updateBox(
  state: EditorState,
  accent: string,
  index: number,
  box: Box,
): EditorState {
  checkBox(box);
  const idx = regionIndexOf(state, accent);
  const region = state.draft.regions[idx]!;
  if (index < 0 || index >= region.boxes.length) {
    throw new Error(`box index ${index} out of range`);
  }
  const boxes = region.boxes.map((b, i) => (i === index ? box : b));
  const regions = state.draft.regions.map((r, i) =>
    i === idx ? { ...r, boxes } : r,
  );
  return withDraft(state, { regions });
}

/** Remove one box.  Removing the last box drops the whole region, because a
 * region with no boxes is not a valid config. */
export function deleteBox(state: EditorState, accent: string, index: number): EditorState {
  const idx = regionIndexOf(state, accent);
  const region = state.draft.regions[idx]!;
  if (index < 0 || index >= region.boxes.length) {
    throw new Error(`box index ${index} out of range`);
  }
  let regions;
  if (region.boxes.length === 1) {
    regions = state.draft.regions.filter((_, i) => i !== idx);
  } else {
    const boxes = region.boxes.filter((_, i) => i !== index);
    regions = state.draft.regions.map((r, i) => (i === idx ? { ...r, boxes } : r));
  }
  return withDraft(state, { regions });
}

export function removeAccent(state: EditorState, accent: string): EditorState {
  const idx = regionIndexOf(state, accent);
  const regions = state.draft.regions.filter((_, i) => i !== idx);
  const next = withDraft(state, { regions });
  if (state.selectedAccent === accent) {
    return { ...next, selectedAccent: null };
  }
  return next;
}

/** Replace the whole draft, e.g. after importing a file or the initial
 * GET /regions load. */
export function replaceDraft(state: EditorState, draft: RegionConfig): EditorState {
  const next = withDraft(state, draft);
  const keep =
    state.selectedAccent !== null &&
    draft.regions.some((r) => r.accent === state.selectedAccent);
  return { ...next, selectedAccent: keep ? state.selectedAccent : null };
}

/** Record a query response.  A response for any draft older than the latest
 * edit is discarded without touching the state, as is a duplicate delivery
 * of the version already shown. */
export function applyResponse(
  state: EditorState,
  version: number,
  stats: QueryResponse,
): EditorState {
  if (version > state.version) {
    throw new Error(`response version ${version} is ahead of draft ${state.version}`);
  }
  if (version < state.version) return state;
  if (version <= state.statsVersion) return state;
  return { ...state, stats, statsVersion: version, error: null };
}

/** Record a failed query.  The draft and any previously shown stats stay
 * untouched; only the banner text changes, and only for current requests. */
export function applyError(state: EditorState, version: number, message: string): EditorState {
  if (version < state.version) return state;
  return { ...state, error: message };
}

export function clearError(state: EditorState): EditorState {
  if (state.error === null) return state;
  return { ...state, error: null };
}
