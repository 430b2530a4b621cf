/**
 * Browser entry point: an equirectangular map canvas for drawing accent
 * region boxes, with live corpus stats from the accentkit service.
 *
 * All server communication goes through the HTTP client in api.ts.  The
 * prediction heatmap is fetched once at startup; region edits re-query
 * stats after a short quiet period, with at most one request in flight.
 */

import { createApi, ApiError } from "./api.js";
import { debounce, singleFlight } from "./debounce.js";
import {
  boxFromCorners,
  boxLonSpan,
  boxToRects,
  pxToLatLon,
  clampLat,
  normalizeLon,
  shiftBox,
  type LatLon,
  type Point,
} from "./geometry.js";
import { exportRegions, importRegions } from "./serialize.js";
import {
  accentNames,
  addBox,
  applyError,
  applyResponse,
  deleteBox,
  initialState,
  isDirty,
  regionOf,
  removeAccent,
  replaceDraft,
  selectAccent,
  updateBox,
  type EditorState,
} from "./state.js";
import type { Box, HeatmapResponse } from "./types.js";

const QUERY_QUIET_MS = 300;
const EDGE_GRAB_PX = 6;

const PALETTE = [
  "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4",
  "#46f0f0", "#f032e6", "#bcf60c", "#008080", "#9a6324",
];

type Edge = "n" | "s" | "w" | "e";

type Drag =
  | { kind: "draw"; start: LatLon; current: LatLon; wrap: boolean }
  | { kind: "move"; index: number; box: Box; startPx: Point; dLat: number; dLon: number }
  | { kind: "resize"; index: number; box: Box; edge: Edge; at: LatLon };

function must<T extends HTMLElement>(id: string): T {
  const el = document.getElementById(id);
  if (el === null) throw new Error(`missing element #${id}`);
  return el as T;
}

function previewBox(drag: Drag): Box {
  if (drag.kind === "draw") {
    return boxFromCorners(drag.start, drag.current, drag.wrap);
  }
  if (drag.kind === "move") {
    return shiftBox(drag.box, drag.dLat, drag.dLon);
  }
  const b = { ...drag.box };
  if (drag.edge === "n") b.lat_max = clampLat(Math.max(drag.at.lat, b.lat_min));
  if (drag.edge === "s") b.lat_min = clampLat(Math.min(drag.at.lat, b.lat_max));
  if (drag.edge === "w") b.lon_west = normalizeLon(drag.at.lon);
  if (drag.edge === "e") b.lon_east = normalizeLon(drag.at.lon);
  return b;
}

function main(): void {
  const canvas = must<HTMLCanvasElement>("map");
  const maybeCtx = canvas.getContext("2d");
  if (maybeCtx === null) throw new Error("canvas 2d context unavailable");
  const ctx: CanvasRenderingContext2D = maybeCtx;
  const statusEl = must<HTMLElement>("status");
  const errorEl = must<HTMLElement>("error");
  const accentListEl = must<HTMLElement>("accent-list");
  const boxListEl = must<HTMLElement>("box-list");
  const accentInput = must<HTMLInputElement>("accent-name");
  const addAccentBtn = must<HTMLButtonElement>("add-accent");
  const exportBtn = must<HTMLButtonElement>("export");
  const importInput = must<HTMLInputElement>("import-file");

  const api = createApi("");
  let state: EditorState = initialState();
  let heatmap: HeatmapResponse | null = null;
  let drag: Drag | null = null;

  const submit = singleFlight();
  const runQuery = (): void => {
    submit(async () => {
      const version = state.version;
      const body = { regions: state.draft.regions };
      try {
        const stats = await api.query(body);
        state = applyResponse(state, version, stats);
      } catch (err) {
        const msg = err instanceof ApiError ? err.message : `query failed: ${String(err)}`;
        state = applyError(state, version, msg);
      }
      render();
    });
  };
  const scheduleQuery = debounce(QUERY_QUIET_MS, runQuery);

  const commit = (next: EditorState): void => {
    state = next;
    scheduleQuery();
    render();
  };

  function colorOf(accent: string): string {
    const names = accentNames(state);
    const idx = names.indexOf(accent);
    return PALETTE[(idx >= 0 ? idx : names.length) % PALETTE.length]!;
  }

  function drawHeatmap(): void {
    if (heatmap === null || heatmap.bins.length === 0) return;
    const w = canvas.width;
    const h = canvas.height;
    const cellW = (heatmap.cell / 360) * w;
    const cellH = (heatmap.cell / 180) * h;
    const peak = Math.max(...heatmap.bins.map((b) => b.count));
    for (const bin of heatmap.bins) {
      const x = ((bin.lon + 180) / 360) * w;
      const y = ((90 - (bin.lat + heatmap.cell)) / 180) * h;
      ctx.fillStyle = `rgba(30, 90, 200, ${(0.15 + 0.75 * (bin.count / peak)).toFixed(3)})`;
      ctx.fillRect(x, y, Math.max(cellW, 1), Math.max(cellH, 1));
    }
  }

  function drawBox(box: Box, color: string, emphasized: boolean, dashed: boolean): void {
    ctx.strokeStyle = color;
    ctx.lineWidth = emphasized ? 2.5 : 1.25;
    ctx.setLineDash(dashed ? [5, 4] : []);
    ctx.fillStyle = color + "22";
    for (const r of boxToRects(box, canvas.width, canvas.height)) {
      ctx.fillRect(r.x, r.y, r.w, r.h);
      ctx.strokeRect(r.x, r.y, r.w, r.h);
    }
    ctx.setLineDash([]);
  }

  function render(): void {
    ctx.fillStyle = "#f7f4ee";
    ctx.fillRect(0, 0, canvas.width, canvas.height);
    ctx.strokeStyle = "#d8d2c4";
    ctx.lineWidth = 1;
    for (let lon = -150; lon <= 150; lon += 30) {
      const x = ((lon + 180) / 360) * canvas.width;
      ctx.beginPath();
      ctx.moveTo(x, 0);
      ctx.lineTo(x, canvas.height);
      ctx.stroke();
    }
    for (let lat = -60; lat <= 60; lat += 30) {
      const y = ((90 - lat) / 180) * canvas.height;
      ctx.beginPath();
      ctx.moveTo(0, y);
      ctx.lineTo(canvas.width, y);
      ctx.stroke();
    }
    drawHeatmap();

    for (const region of state.draft.regions) {
      const selected = region.accent === state.selectedAccent;
      region.boxes.forEach((box, i) => {
        const hidden =
          drag !== null &&
          drag.kind !== "draw" &&
          selected &&
          drag.index === i;
        if (!hidden) drawBox(box, colorOf(region.accent), selected, false);
      });
    }
    if (drag !== null && state.selectedAccent !== null) {
      drawBox(previewBox(drag), colorOf(state.selectedAccent), true, true);
    }

    statusEl.textContent = isDirty(state)
      ? "updating stats..."
      : state.stats === null
        ? "no stats yet"
        : "stats up to date";
    errorEl.textContent = state.error ?? "";
    errorEl.style.display = state.error === null ? "none" : "block";

    renderAccentList();
    renderBoxList();
  }

  function statLine(accent: string): string {
    const row = state.stats?.[accent];
    if (row === undefined) return "no matched utterances";
    const prec =
      row.precision_vs_self === null ? "n/a" : row.precision_vs_self.toFixed(2);
    return `${row.hours.toFixed(2)} h, ${row.n_utterances} utts, ` +
      `${row.n_speakers} speakers, precision ${prec}`;
  }

  function renderAccentList(): void {
    accentListEl.replaceChildren();
    const pending =
      state.selectedAccent !== null && regionOf(state, state.selectedAccent) === undefined;
    for (const region of state.draft.regions) {
      const li = document.createElement("li");
      li.className = region.accent === state.selectedAccent ? "selected" : "";
      const swatch = document.createElement("span");
      swatch.className = "swatch";
      swatch.style.background = colorOf(region.accent);
      const label = document.createElement("span");
      label.textContent = ` ${region.accent} (${region.boxes.length} box${region.boxes.length === 1 ? "" : "es"})`;
      label.className = "accent-label";
      label.addEventListener("click", () => {
        commitSelection(selectAccent(state, region.accent));
      });
      const stats = document.createElement("small");
      stats.textContent = statLine(region.accent);
      const del = document.createElement("button");
      del.textContent = "remove";
      del.addEventListener("click", () => {
        commit(removeAccent(state, region.accent));
      });
      li.append(swatch, label, del, document.createElement("br"), stats);
      accentListEl.appendChild(li);
    }
    if (pending) {
      const li = document.createElement("li");
      li.className = "selected";
      li.textContent = `${state.selectedAccent} (draw the first box)`;
      accentListEl.appendChild(li);
    }
  }

  // Selection changes do not edit the draft, so no query is scheduled.
  function commitSelection(next: EditorState): void {
    state = next;
    render();
  }

  function renderBoxList(): void {
    boxListEl.replaceChildren();
    if (state.selectedAccent === null) return;
    const region = regionOf(state, state.selectedAccent);
    if (region === undefined) return;
    region.boxes.forEach((box, i) => {
      const row = document.createElement("li");
      const fields: (keyof Box)[] = ["lat_min", "lat_max", "lon_west", "lon_east"];
      for (const field of fields) {
        const input = document.createElement("input");
        input.type = "number";
        input.step = "0.5";
        input.value = String(box[field]);
        input.title = field;
        input.addEventListener("change", () => {
          const value = Number(input.value);
          const next = { ...box, [field]: value };
          try {
            commit(updateBox(state, state.selectedAccent!, i, {
              ...next,
              lon_west: normalizeLon(next.lon_west),
              lon_east: normalizeLon(next.lon_east),
            }));
          } catch {
            render(); // revert the input to the stored value
          }
        });
        row.appendChild(input);
      }
      const del = document.createElement("button");
      del.textContent = "delete";
      del.addEventListener("click", () => {
        commit(deleteBox(state, state.selectedAccent!, i));
      });
      row.appendChild(del);
      boxListEl.appendChild(row);
    });
  }

  function canvasLatLon(ev: MouseEvent): LatLon {
    const rect = canvas.getBoundingClientRect();
    const x = ((ev.clientX - rect.left) / rect.width) * canvas.width;
    const y = ((ev.clientY - rect.top) / rect.height) * canvas.height;
    return pxToLatLon({ x, y }, canvas.width, canvas.height);
  }

  function canvasPx(ev: MouseEvent): { x: number; y: number } {
    const rect = canvas.getBoundingClientRect();
    return {
      x: ((ev.clientX - rect.left) / rect.width) * canvas.width,
      y: ((ev.clientY - rect.top) / rect.height) * canvas.height,
    };
  }

  /** Edge hit, if the pointer is within EDGE_GRAB_PX of a draggable edge.
   * On wrap boxes the seam at the antimeridian is not an edge. */
  function edgeAt(box: Box, px: { x: number; y: number }): Edge | null {
    const rects = boxToRects(box, canvas.width, canvas.height);
    const wraps = rects.length === 2;
    for (let r = 0; r < rects.length; r++) {
      const rect = rects[r]!;
      const inX = px.x >= rect.x - EDGE_GRAB_PX && px.x <= rect.x + rect.w + EDGE_GRAB_PX;
      const inY = px.y >= rect.y - EDGE_GRAB_PX && px.y <= rect.y + rect.h + EDGE_GRAB_PX;
      if (!inX || !inY) continue;
      const westRect = !wraps || r === 0;
      const eastRect = !wraps || r === 1;
      if (westRect && Math.abs(px.x - rect.x) <= EDGE_GRAB_PX) return "w";
      if (eastRect && Math.abs(px.x - (rect.x + rect.w)) <= EDGE_GRAB_PX) return "e";
      if (Math.abs(px.y - rect.y) <= EDGE_GRAB_PX) return "n";
      if (Math.abs(px.y - (rect.y + rect.h)) <= EDGE_GRAB_PX) return "s";
    }
    return null;
  }

  function insideRects(box: Box, px: { x: number; y: number }): boolean {
    return boxToRects(box, canvas.width, canvas.height).some(
      (r) => px.x >= r.x && px.x < r.x + r.w && px.y >= r.y && px.y < r.y + r.h,
    );
  }

  canvas.addEventListener("mousedown", (ev) => {
    if (state.selectedAccent === null) return;
    const px = canvasPx(ev);
    const pos = canvasLatLon(ev);
    const region = regionOf(state, state.selectedAccent);
    if (region !== undefined) {
      for (let i = 0; i < region.boxes.length; i++) {
        const box = region.boxes[i]!;
        const edge = edgeAt(box, px);
        if (edge !== null) {
          drag = { kind: "resize", index: i, box, edge, at: pos };
          return;
        }
      }
      for (let i = 0; i < region.boxes.length; i++) {
        const box = region.boxes[i]!;
        if (insideRects(box, px)) {
          drag = { kind: "move", index: i, box, startPx: px, dLat: 0, dLon: 0 };
          return;
        }
      }
    }
    // Shift starts an eastward box so a drag may cross the antimeridian.
    drag = { kind: "draw", start: pos, current: pos, wrap: ev.shiftKey };
  });

  canvas.addEventListener("mousemove", (ev) => {
    if (drag === null) return;
    const pos = canvasLatLon(ev);
    if (drag.kind === "draw") {
      drag = { ...drag, current: pos, wrap: ev.shiftKey };
    } else if (drag.kind === "move") {
      // Pixel deltas, not latlon differences, so crossing the map edge
      // cannot produce a 360-degree jump.
      const px = canvasPx(ev);
      drag = {
        ...drag,
        dLat: -(((px.y - drag.startPx.y) / canvas.height) * 180),
        dLon: ((px.x - drag.startPx.x) / canvas.width) * 360,
      };
    } else {
      drag = { ...drag, at: pos };
    }
    render();
  });

  const endDrag = (): void => {
    if (drag === null || state.selectedAccent === null) {
      drag = null;
      return;
    }
    const finished = drag;
    drag = null;
    const box = previewBox(finished);
    if (finished.kind === "draw") {
      const tiny = box.lat_max - box.lat_min < 0.5 || boxLonSpan(box) < 0.5;
      if (tiny) {
        render();
        return;
      }
      commit(addBox(state, state.selectedAccent, box));
    } else {
      commit(updateBox(state, state.selectedAccent, finished.index, box));
    }
  };
  canvas.addEventListener("mouseup", endDrag);
  canvas.addEventListener("mouseleave", endDrag);

  addAccentBtn.addEventListener("click", () => {
    const name = accentInput.value.trim();
    if (name === "") return;
    accentInput.value = "";
    commitSelection(selectAccent(state, name));
  });
  accentInput.addEventListener("keydown", (ev) => {
    if (ev.key === "Enter") addAccentBtn.click();
  });

  exportBtn.addEventListener("click", () => {
    const blob = new Blob([exportRegions(state.draft)], { type: "application/json" });
    const url = URL.createObjectURL(blob);
    const a = document.createElement("a");
    a.href = url;
    a.download = "regions.json";
    a.click();
    URL.revokeObjectURL(url);
  });

  importInput.addEventListener("change", async () => {
    const file = importInput.files?.[0];
    if (file === undefined) return;
    importInput.value = "";
    try {
      const draft = importRegions(await file.text());
      commit(replaceDraft(state, draft));
    } catch (err) {
      state = applyError(state, state.version, `import failed, ${(err as Error).message}`);
      render();
    }
  });

  render();

  void (async () => {
    try {
      const [regions, grid] = await Promise.all([api.regions(), api.heatmap()]);
      heatmap = grid;
      commit(replaceDraft(state, regions));
      scheduleQuery.flush();
    } catch (err) {
      const msg = err instanceof ApiError ? err.message : String(err);
      state = applyError(state, state.version, `startup load failed, ${msg}`);
      render();
    }
  })();
}

main();
