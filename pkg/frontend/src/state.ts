import type { Rect } from "./types.js";

/** Normalize a drag gesture (any corner order) into a valid rectangle,
 * clamped to coordinate bounds, so every payload we POST satisfies the
 * server's rectangle invariants. */
export const normalizeDrag = (
  lat1: number,
  lon1: number,
  lat2: number,
  lon2: number,
): Rect => {
  const clampLat = (v: number) => Math.min(90, Math.max(-90, v));
  const clampLon = (v: number) => Math.min(180, Math.max(-180, v));
  return {
    lat_min: clampLat(Math.min(lat1, lat2)),
    lat_max: clampLat(Math.max(lat1, lat2)),
    lon_min: clampLon(Math.min(lon1, lon2)),
    lon_max: clampLon(Math.max(lon1, lon2)),
  };
};

export const isValidRect = (r: Rect): boolean =>
  r.lat_min <= r.lat_max &&
  r.lon_min <= r.lon_max &&
  r.lat_min >= -90 &&
  r.lat_max <= 90 &&
  r.lon_min >= -180 &&
  r.lon_max <= 180;

/** Serializes async probes so the latest gesture always wins: while one
 * request is in flight, newer rectangles overwrite the pending slot and
 * intermediate ones are never sent. */
export class ProbeCoalescer<T> {
  private inFlight = false;
  private pending: Rect | null = null;

  constructor(
    private readonly send: (rect: Rect) => Promise<T>,
    private readonly onResult: (rect: Rect, result: T) => void,
    private readonly onError: (rect: Rect, error: unknown) => void,
  ) {}

  submit(rect: Rect): void {
    this.pending = rect;
    if (!this.inFlight) void this.drain();
  }

  private async drain(): Promise<void> {
    this.inFlight = true;
    while (this.pending !== null) {
      const rect = this.pending;
      this.pending = null;
      try {
        const result = await this.send(rect);
        this.onResult(rect, result);
      } catch (err) {
        this.onError(rect, err);
      }
    }
    this.inFlight = false;
  }
}
