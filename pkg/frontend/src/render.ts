import type { DensityGrid, PointFeature, Rect } from "./types.js";

/** Marker radius in pixels, monotone in the sample count: equal samples
 * get equal radii, more samples never a smaller radius. */
export const markerRadius = (
  samples: number,
  maxSamples: number,
  rMin = 3,
  rMax = 16,
): number => {
  if (maxSamples <= 0) return rMin;
  const t = Math.sqrt(Math.max(0, samples) / maxSamples);
  return rMin + t * (rMax - rMin);
};

export interface Viewport {
  bounds: Rect; // data extent, padded
  width: number;
  height: number;
}

/** Pad a data extent so degenerate extents still project. */
export const paddedBounds = (r: Rect, frac = 0.08): Rect => {
  const dLat = Math.max(r.lat_max - r.lat_min, 1e-4);
  const dLon = Math.max(r.lon_max - r.lon_min, 1e-4);
  return {
    lat_min: r.lat_min - dLat * frac,
    lat_max: r.lat_max + dLat * frac,
    lon_min: r.lon_min - dLon * frac,
    lon_max: r.lon_max + dLon * frac,
  };
};

export const toPixel = (
  vp: Viewport,
  lat: number,
  lon: number,
): [number, number] => {
  const { bounds } = vp;
  const x =
    ((lon - bounds.lon_min) / (bounds.lon_max - bounds.lon_min)) * vp.width;
  const y =
    (1 - (lat - bounds.lat_min) / (bounds.lat_max - bounds.lat_min)) *
    vp.height;
  return [x, y];
};

export const toLatLon = (
  vp: Viewport,
  x: number,
  y: number,
): [number, number] => {
  const { bounds } = vp;
  const lon =
    bounds.lon_min + (x / vp.width) * (bounds.lon_max - bounds.lon_min);
  const lat =
    bounds.lat_min + (1 - y / vp.height) * (bounds.lat_max - bounds.lat_min);
  return [lat, lon];
};

const axisStep = (span: number): number => {
  const raw = span / 5;
  const mag = Math.pow(10, Math.floor(Math.log10(raw)));
  for (const m of [1, 2, 5, 10]) {
    if (raw <= m * mag) return m * mag;
  }
  return 10 * mag;
};

/** Blank-canvas basemap: grey frame plus labelled lat/lon grid lines,
 * so the tool works air-gapped with no tile server. */
export const drawAxes = (ctx: CanvasRenderingContext2D, vp: Viewport): void => {
  ctx.save();
  ctx.strokeStyle = "#d5d9dd";
  ctx.fillStyle = "#7a838c";
  ctx.font = "10px sans-serif";
  ctx.lineWidth = 1;
  const { bounds } = vp;
  const latStep = axisStep(bounds.lat_max - bounds.lat_min);
  const lonStep = axisStep(bounds.lon_max - bounds.lon_min);
  for (
    let lat = Math.ceil(bounds.lat_min / latStep) * latStep;
    lat <= bounds.lat_max;
    lat += latStep
  ) {
    const [, y] = toPixel(vp, lat, bounds.lon_min);
    ctx.beginPath();
    ctx.moveTo(0, y);
    ctx.lineTo(vp.width, y);
    ctx.stroke();
    ctx.fillText(lat.toFixed(3), 4, y - 3);
  }
  for (
    let lon = Math.ceil(bounds.lon_min / lonStep) * lonStep;
    lon <= bounds.lon_max;
    lon += lonStep
  ) {
    const [x] = toPixel(vp, bounds.lat_min, lon);
    ctx.beginPath();
    ctx.moveTo(x, 0);
    ctx.lineTo(x, vp.height);
    ctx.stroke();
    ctx.fillText(lon.toFixed(3), x + 3, vp.height - 4);
  }
  ctx.restore();
};

export const drawHeat = (
  ctx: CanvasRenderingContext2D,
  vp: Viewport,
  grid: DensityGrid,
): void => {
  let max = 0;
  for (const row of grid.cell_samples)
    for (const v of row) max = Math.max(max, v);
  if (max === 0) return;
  const r = grid.rect;
  const dLat = (r.lat_max - r.lat_min) / grid.rows;
  const dLon = (r.lon_max - r.lon_min) / grid.cols;
  ctx.save();
  for (let i = 0; i < grid.rows; i++) {
    for (let j = 0; j < grid.cols; j++) {
      const v = grid.cell_samples[i][j];
      if (v === 0) continue;
      const [x0, y0] = toPixel(vp, r.lat_min + (i + 1) * dLat, r.lon_min + j * dLon);
      const [x1, y1] = toPixel(vp, r.lat_min + i * dLat, r.lon_min + (j + 1) * dLon);
      ctx.fillStyle = `rgba(230, 90, 30, ${0.12 + 0.5 * (v / max)})`;
      ctx.fillRect(x0, y0, x1 - x0, y1 - y0);
    }
  }
  ctx.restore();
};

export const drawCells = (
  ctx: CanvasRenderingContext2D,
  vp: Viewport,
  features: PointFeature[],
): void => {
  const maxSamples = features.reduce(
    (m, f) => Math.max(m, f.properties.samples),
    0,
  );
  ctx.save();
  for (const f of features) {
    const [lon, lat] = f.geometry.coordinates;
    const [x, y] = toPixel(vp, lat, lon);
    const radius = markerRadius(f.properties.samples, maxSamples);
    ctx.beginPath();
    ctx.arc(x, y, radius, 0, Math.PI * 2);
    ctx.fillStyle =
      f.properties.rank === 1 ? "rgba(200, 30, 60, 0.75)" : "rgba(40, 90, 200, 0.45)";
    ctx.fill();
    if (f.properties.rank === 1) {
      ctx.lineWidth = 2;
      ctx.strokeStyle = "#8a0020";
      ctx.stroke();
    }
  }
  ctx.restore();
};

export const drawRect = (
  ctx: CanvasRenderingContext2D,
  vp: Viewport,
  rect: Rect,
  committed: boolean,
): void => {
  const [x0, y0] = toPixel(vp, rect.lat_max, rect.lon_min);
  const [x1, y1] = toPixel(vp, rect.lat_min, rect.lon_max);
  ctx.save();
  ctx.lineWidth = 2;
  ctx.strokeStyle = committed ? "#1a7f37" : "#b58900";
  ctx.setLineDash(committed ? [] : [6, 4]);
  ctx.strokeRect(x0, y0, x1 - x0, y1 - y0);
  ctx.fillStyle = committed
    ? "rgba(26, 127, 55, 0.08)"
    : "rgba(181, 137, 0, 0.08)";
  ctx.fillRect(x0, y0, x1 - x0, y1 - y0);
  ctx.restore();
};
