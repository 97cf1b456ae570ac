export interface Rect {
  lat_min: number;
  lat_max: number;
  lon_min: number;
  lon_max: number;
}

export interface Demarcation {
  mnc: number;
  rect: Rect;
  area_km2: number;
  source: string;
  contained_cells: number;
  contained_samples: number;
}

export interface PointFeature {
  type: "Feature";
  geometry: { type: "Point"; coordinates: [number, number] }; // lon, lat
  properties: { tac: number; cid: number; samples: number; rank: number };
}

export interface FeatureCollection {
  type: "FeatureCollection";
  features: PointFeature[];
}

export interface MnoSummary {
  label: string;
  mnc: number;
  market_share: number;
  httac?: number;
  httac_total_samples?: number;
  unique_cell_count?: number;
  top_cell_count?: number;
  error?: string;
}

export interface DensityGrid {
  rect: Rect;
  rows: number;
  cols: number;
  cell_samples: number[][];
  overflow_samples: number;
  binned_cells: number;
}
