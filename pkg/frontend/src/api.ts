import type {
  Demarcation,
  DensityGrid,
  FeatureCollection,
  MnoSummary,
  Rect,
} from "./types.js";

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

/** Thin client for the drill service. All geometry numbers the UI ever
 * shows come back from these calls; the client never computes them. */
export class ApiClient {
  constructor(
    private readonly base = "",
    private readonly fetchFn: typeof fetch = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(this.base + path, init);
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const body = await resp.json();
        if (body.detail) detail = String(body.detail);
      } catch {
        /* non-JSON error body */
      }
      throw new ApiError(detail, resp.status);
    }
    return (await resp.json()) as T;
  }

  listMnos(): Promise<{ mnos: MnoSummary[]; n_c: number; mcc: number }> {
    return this.request("/api/mnos");
  }

  cells(mnc: number): Promise<FeatureCollection> {
    return this.request(`/api/mnos/${mnc}/cells`);
  }

  grid(mnc: number, rows: number, cols: number): Promise<DensityGrid> {
    return this.request(`/api/mnos/${mnc}/grid?rows=${rows}&cols=${cols}`);
  }

  suggest(mnc: number, fraction: number): Promise<Demarcation> {
    return this.request(`/api/mnos/${mnc}/suggest?fraction=${fraction}`);
  }

  currentDemarcation(mnc: number): Promise<{ demarcation: Demarcation | null }> {
    return this.request(`/api/mnos/${mnc}/demarcation`);
  }

  probe(
    mnc: number,
    rect: Rect,
    final = false,
    note = "",
  ): Promise<{ demarcation: Demarcation; persisted: boolean }> {
    return this.request(`/api/mnos/${mnc}/demarcation`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ rect, final, note }),
    });
  }
}
