import { describe, expect, it } from "vitest";

import { exportRegions, importRegions } from "../src/serialize.js";
import {
  accentNames,
  addBox,
  applyError,
  applyResponse,
  clearError,
  deleteBox,
  initialState,
  isDirty,
  regionOf,
  removeAccent,
  replaceDraft,
  selectAccent,
  updateBox,
  type EditorState,
} from "../src/state.js";
import type { Box, QueryResponse } from "../src/types.js";

const BOX: Box = { lat_min: 0, lat_max: 10, lon_west: 20, lon_east: 40 };
const BOX2: Box = { lat_min: -5, lat_max: 5, lon_west: 170, lon_east: -160 };

function deepFreeze<T>(value: T): T {
  if (typeof value === "object" && value !== null) {
    for (const key of Object.keys(value)) {
      deepFreeze((value as Record<string, unknown>)[key]);
    }
    Object.freeze(value);
  }
  return value;
}

function seeded(): EditorState {
  let s = initialState();
  s = addBox(s, "A", BOX);
  s = addBox(s, "B", BOX2);
  return s;
}

const STATS: QueryResponse = {
  A: { hours: 1.5, n_utterances: 3, n_speakers: 2, precision_vs_self: 1.0 },
};

describe("initialState", () => {
  it("starts with an empty valid draft and no stats", () => {
    const s = initialState();
    expect(s.draft).toEqual({ regions: [] });
    expect(s.version).toBe(0);
    expect(s.stats).toBeNull();
    expect(s.error).toBeNull();
    expect(isDirty(s)).toBe(true);
  });
});

describe("selection", () => {
  it("allows selecting an accent that has no region yet", () => {
    const s = selectAccent(initialState(), "NewPlace");
    expect(s.selectedAccent).toBe("NewPlace");
    expect(regionOf(s, "NewPlace")).toBeUndefined();
  });

  it("does not bump the version", () => {
    const s0 = seeded();
    const s1 = selectAccent(s0, "A");
    expect(s1.version).toBe(s0.version);
  });

  it("rejects a blank name", () => {
    expect(() => selectAccent(initialState(), "  ")).toThrow("empty");
  });
});

describe("addBox", () => {
  it("creates the region on first box, appending at lowest priority", () => {
    const s = seeded();
    expect(accentNames(s)).toEqual(["A", "B"]);
    expect(regionOf(s, "A")!.boxes).toEqual([BOX]);
  });

  it("appends further boxes to the same region", () => {
    const s = addBox(seeded(), "A", BOX2);
    expect(regionOf(s, "A")!.boxes).toEqual([BOX, BOX2]);
    expect(accentNames(s)).toEqual(["A", "B"]);
  });

  it("matches the accent case-insensitively and keeps the original name", () => {
    const s = addBox(seeded(), "  a ", BOX2);
    expect(accentNames(s)).toEqual(["A", "B"]);
    expect(regionOf(s, "A")!.boxes).toHaveLength(2);
  });

  it("bumps the version exactly once per edit", () => {
    const s0 = initialState();
    const s1 = addBox(s0, "A", BOX);
    const s2 = addBox(s1, "A", BOX2);
    expect([s0.version, s1.version, s2.version]).toEqual([0, 1, 2]);
  });

  it("rejects invalid boxes", () => {
    expect(() => addBox(initialState(), "A", { ...BOX, lat_min: 50 })).toThrow("latitude");
    expect(() => addBox(initialState(), "A", { ...BOX, lon_west: 180 })).toThrow("longitude");
    expect(() => addBox(initialState(), "A", { ...BOX, lat_max: Number.NaN })).toThrow("finite");
  });
});

describe("updateBox and deleteBox", () => {
  it("replaces a box in place", () => {
    const s = updateBox(seeded(), "A", 0, BOX2);
    expect(regionOf(s, "A")!.boxes).toEqual([BOX2]);
  });

  it("checks the index", () => {
    expect(() => updateBox(seeded(), "A", 1, BOX2)).toThrow("out of range");
    expect(() => deleteBox(seeded(), "A", -1)).toThrow("out of range");
  });

  it("deletes one box of several", () => {
    const s0 = addBox(seeded(), "A", BOX2);
    const s1 = deleteBox(s0, "A", 0);
    expect(regionOf(s1, "A")!.boxes).toEqual([BOX2]);
  });

  it("removes the accent when its last box is deleted", () => {
    const s = deleteBox(seeded(), "A", 0);
    expect(regionOf(s, "A")).toBeUndefined();
    expect(accentNames(s)).toEqual(["B"]);
  });

  it("keeps the accent selected after its last box is deleted", () => {
    const s0 = selectAccent(seeded(), "A");
    const s1 = deleteBox(s0, "A", 0);
    expect(s1.selectedAccent).toBe("A");
  });

  it("never leaves an empty region in the draft", () => {
    let s = seeded();
    s = addBox(s, "C", BOX);
    s = deleteBox(s, "B", 0);
    s = deleteBox(s, "A", 0);
    for (const region of s.draft.regions) {
      expect(region.boxes.length).toBeGreaterThan(0);
    }
    expect(() => importRegions(exportRegions(s.draft))).not.toThrow();
  });
});

describe("removeAccent", () => {
  it("drops the region and clears a matching selection", () => {
    const s0 = selectAccent(seeded(), "B");
    const s1 = removeAccent(s0, "B");
    expect(accentNames(s1)).toEqual(["A"]);
    expect(s1.selectedAccent).toBeNull();
  });

  it("keeps an unrelated selection", () => {
    const s0 = selectAccent(seeded(), "A");
    const s1 = removeAccent(s0, "B");
    expect(s1.selectedAccent).toBe("A");
  });
});

describe("replaceDraft", () => {
  it("swaps the draft and bumps the version", () => {
    const s0 = seeded();
    const s1 = replaceDraft(s0, { regions: [] });
    expect(s1.draft.regions).toEqual([]);
    expect(s1.version).toBe(s0.version + 1);
  });

  it("keeps the selection only if the accent survives", () => {
    const s0 = selectAccent(seeded(), "A");
    const keep = replaceDraft(s0, { regions: [{ accent: "A", boxes: [BOX] }] });
    expect(keep.selectedAccent).toBe("A");
    const drop = replaceDraft(s0, { regions: [{ accent: "Z", boxes: [BOX] }] });
    expect(drop.selectedAccent).toBeNull();
  });
});

describe("applyResponse", () => {
  it("applies a response for the current draft and clears dirty", () => {
    const s0 = seeded();
    const s1 = applyResponse(s0, s0.version, STATS);
    expect(s1.stats).toBe(STATS);
    expect(isDirty(s1)).toBe(false);
    expect(s1.error).toBeNull();
  });

  it("discards a response for an older draft entirely", () => {
    const s0 = seeded();
    const old = s0.version;
    const s1 = addBox(s0, "C", BOX);
    const s2 = applyResponse(s1, old, STATS);
    expect(s2).toBe(s1);
    expect(s2.stats).toBeNull();
    expect(isDirty(s2)).toBe(true);
  });

  it("keeps newer stats over a duplicate delivery", () => {
    const s0 = seeded();
    const s1 = applyResponse(s0, s0.version, STATS);
    const s2 = applyResponse(s1, s0.version, {});
    expect(s2).toBe(s1);
    expect(s2.stats).toBe(STATS);
  });

  it("clears a previous error on success", () => {
    const s0 = applyError(seeded(), 2, "boom");
    const s1 = applyResponse(s0, s0.version, STATS);
    expect(s1.error).toBeNull();
  });

  it("rejects a version from the future", () => {
    const s0 = seeded();
    expect(() => applyResponse(s0, s0.version + 1, STATS)).toThrow("ahead");
  });
});

describe("applyError", () => {
  it("preserves the draft and existing stats while showing the banner", () => {
    const s0 = applyResponse(seeded(), 2, STATS);
    const s1 = addBox(s0, "C", BOX);
    const s2 = applyError(s1, s1.version, "service unavailable");
    expect(s2.error).toBe("service unavailable");
    expect(s2.draft).toEqual(s1.draft);
    expect(s2.stats).toBe(STATS);
  });

  it("ignores errors from requests older than the latest edit", () => {
    const s0 = seeded();
    const old = s0.version;
    const s1 = addBox(s0, "C", BOX);
    const s2 = applyError(s1, old, "stale failure");
    expect(s2).toBe(s1);
    expect(s2.error).toBeNull();
  });

  it("clearError resets the banner only", () => {
    const s0 = applyError(seeded(), 2, "x");
    const s1 = clearError(s0);
    expect(s1.error).toBeNull();
    expect(s1.draft).toEqual(s0.draft);
  });
});

describe("immutability", () => {
  it("operations never mutate their input state", () => {
    const s0 = deepFreeze(seeded());
    expect(() => addBox(s0, "A", BOX2)).not.toThrow();
    expect(() => updateBox(s0, "A", 0, BOX2)).not.toThrow();
    expect(() => deleteBox(s0, "A", 0)).not.toThrow();
    expect(() => removeAccent(s0, "B")).not.toThrow();
    expect(() => replaceDraft(s0, { regions: [] })).not.toThrow();
    expect(() => applyResponse(s0, s0.version, STATS)).not.toThrow();
    expect(() => applyError(s0, s0.version, "x")).not.toThrow();
    expect(regionOf(s0, "A")!.boxes).toEqual([BOX]);
  });
});
