import type { ApiClient } from "./api.js";
import { ProbeCoalescer } from "./state.js";
import type {
  Demarcation,
  DensityGrid,
  FeatureCollection,
  MnoSummary,
  Rect,
} from "./types.js";

export interface UiState {
  mnos: MnoSummary[];
  selectedMnc: number | null;
  cells: FeatureCollection | null;
  grid: DensityGrid | null;
  showHeat: boolean;
  candidate: Rect | null;
  /** Most recent server answer for the candidate; the only source of
   * every displayed area / contained-traffic number. */
  probeResult: Demarcation | null;
  committed: Demarcation | null;
  commitStatus: "none" | "saved";
  error: string | null;
}

const initialState = (): UiState => ({
  mnos: [],
  selectedMnc: null,
  cells: null,
  grid: null,
  showHeat: false,
  candidate: null,
  probeResult: null,
  committed: null,
  commitStatus: "none",
  error: null,
});

/** Orchestrates the demarcation workflow against the drill service.
 * Pure view-model: no DOM access, so the probe-fidelity and round-trip
 * behavior is testable with a stubbed client. */
export class DemarcationController {
  state: UiState = initialState();
  private readonly coalescer: ProbeCoalescer<{
    demarcation: Demarcation;
    persisted: boolean;
  }>;

  constructor(
    private readonly api: ApiClient,
    private readonly onChange: (state: UiState) => void = () => {},
  ) {
    this.coalescer = new ProbeCoalescer(
      (rect) => this.api.probe(this.requireMnc(), rect, false),
      (_rect, result) => {
        this.state.probeResult = result.demarcation;
        this.state.error = null;
        this.emit();
      },
      (_rect, err) => {
        this.state.error = err instanceof Error ? err.message : String(err);
        this.emit();
      },
    );
  }

  private emit(): void {
    this.onChange(this.state);
  }

  private requireMnc(): number {
    if (this.state.selectedMnc === null) throw new Error("no operator selected");
    return this.state.selectedMnc;
  }

  async loadMnos(): Promise<void> {
    try {
      const doc = await this.api.listMnos();
      this.state.mnos = doc.mnos;
      this.state.error = null;
    } catch (err) {
      this.state.error = `failed to load operators: ${err instanceof Error ? err.message : err}`;
    }
    this.emit();
  }

  async selectMno(mnc: number): Promise<void> {
    this.state.selectedMnc = mnc;
    this.state.candidate = null;
    this.state.probeResult = null;
    this.state.committed = null;
    this.state.commitStatus = "none";
    this.state.grid = null;
    try {
      this.state.cells = await this.api.cells(mnc);
      const current = await this.api.currentDemarcation(mnc);
      if (current.demarcation) {
        this.state.committed = current.demarcation;
        this.state.candidate = current.demarcation.rect;
        this.state.probeResult = current.demarcation;
        this.state.commitStatus = "saved";
      }
      this.state.error = null;
    } catch (err) {
      // keep whatever map is on screen, surface the failure
      this.state.cells = this.state.cells ?? null;
      this.state.error = `fetch failed: ${err instanceof Error ? err.message : err}`;
    }
    this.emit();
  }

  async toggleHeat(rows = 24, cols = 24): Promise<void> {
    this.state.showHeat = !this.state.showHeat;
    if (this.state.showHeat && this.state.grid === null) {
      try {
        this.state.grid = await this.api.grid(this.requireMnc(), rows, cols);
      } catch (err) {
        this.state.showHeat = false;
        this.state.error = `grid fetch failed: ${err instanceof Error ? err.message : err}`;
      }
    }
    this.emit();
  }

  /** Called on every rectangle edit: display is updated only once the
   * server answers (latest gesture wins while a probe is in flight). */
  updateCandidate(rect: Rect): void {
    this.state.candidate = rect;
    this.state.commitStatus = "none";
    this.coalescer.submit(rect);
    this.emit();
  }

  async suggest(fraction = 0.8): Promise<void> {
    try {
      const d = await this.api.suggest(this.requireMnc(), fraction);
      this.state.candidate = d.rect;
      this.state.probeResult = d;
      this.state.commitStatus = "none";
      this.state.error = null;
    } catch (err) {
      this.state.error = `suggest failed: ${err instanceof Error ? err.message : err}`;
    }
    this.emit();
  }

  async commit(note = ""): Promise<void> {
    const rect = this.state.candidate;
    if (!rect) {
      this.state.error = "draw a rectangle before committing";
      this.emit();
      return;
    }
    try {
      const result = await this.api.probe(this.requireMnc(), rect, true, note);
      this.state.probeResult = result.demarcation;
      this.state.committed = result.demarcation;
      this.state.commitStatus = "saved";
      this.state.error = null;
    } catch (err) {
      this.state.error = `commit failed: ${err instanceof Error ? err.message : err}`;
    }
    this.emit();
  }

  /** The numbers shown next to the rectangle; verbatim from the last
   * server response, never computed client-side. */
  displayNumbers(): { area: string; cells: string; samples: string } | null {
    const p = this.state.probeResult;
    if (!p) return null;
    return {
      area: `${p.area_km2.toFixed(2)} km²`,
      cells: String(p.contained_cells),
      samples: String(p.contained_samples),
    };
  }
}
