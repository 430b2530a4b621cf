/** Wire types shared with the accentkit stats service. */

export type Box = {
  lat_min: number;
  lat_max: number;
  lon_west: number;
  lon_east: number;
};

export type Region = {
  accent: string;
  boxes: Box[];
};

export type RegionConfig = {
  regions: Region[];
};

export type AccentStats = {
  hours: number;
  n_utterances: number;
  n_speakers: number;
  precision_vs_self: number | null;
};

/** POST /query response: one row per accent that matched at least one utterance. */
export type QueryResponse = Record<string, AccentStats>;

export type HeatmapBin = {
  lat: number;
  lon: number;
  count: number;
};

export type HeatmapResponse = {
  cell: number;
  bins: HeatmapBin[];
};

export type HealthResponse = {
  status: string;
};
