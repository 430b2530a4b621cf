/**
 * Thin typed client for the accentkit stats service.  All communication
 * with the backend goes through these four calls.
 */

import type {
  HealthResponse,
  HeatmapResponse,
  QueryResponse,
  RegionConfig,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    detail: string,
  ) {
    super(detail);
    this.name = "ApiError";
  }
}

async function errorFrom(res: Response): Promise<ApiError> {
  let detail = `HTTP ${res.status}`;
  try {
    const body: unknown = await res.json();
    if (
      typeof body === "object" &&
      body !== null &&
      typeof (body as { detail?: unknown }).detail === "string"
    ) {
      detail = (body as { detail: string }).detail;
    }
  } catch {
    // non-JSON error body; keep the status line
  }
  return new ApiError(res.status, detail);
}

async function asJson<T>(res: Response): Promise<T> {
  if (!res.ok) throw await errorFrom(res);
  return (await res.json()) as T;
}

export type Api = {
  health(): Promise<HealthResponse>;
  regions(): Promise<RegionConfig>;
  query(config: RegionConfig): Promise<QueryResponse>;
  heatmap(cell?: number): Promise<HeatmapResponse>;
};

export function createApi(baseUrl: string, fetchImpl: FetchLike = fetch): Api {
  const base = baseUrl.replace(/\/+$/, "");
  return {
    async health() {
      return asJson<HealthResponse>(await fetchImpl(`${base}/healthz`));
    },
    async regions() {
      return asJson<RegionConfig>(await fetchImpl(`${base}/regions`));
    },
    async query(config) {
      const res = await fetchImpl(`${base}/query`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(config),
      });
      return asJson<QueryResponse>(res);
    },
    async heatmap(cell) {
      const suffix = cell === undefined ? "" : `?cell=${encodeURIComponent(cell)}`;
      return asJson<HeatmapResponse>(await fetchImpl(`${base}/heatmap${suffix}`));
    },
  };
}
