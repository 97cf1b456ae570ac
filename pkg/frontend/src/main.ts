import { ApiClient } from "./api.js";
import { DemarcationController } from "./controller.js";
import {
  drawAxes,
  drawCells,
  drawHeat,
  drawRect,
  paddedBounds,
  toLatLon,
  type Viewport,
} from "./render.js";
import { normalizeDrag } from "./state.js";
import type { Rect } from "./types.js";

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

const canvas = $<HTMLCanvasElement>("map");
const ctx = canvas.getContext("2d")!;
const mnoSelect = $<HTMLSelectElement>("mno-select");
const banner = $("error-banner");
const numbers = $("numbers");
const commitState = $("commit-state");

let viewport: Viewport | null = null;

const controller = new DemarcationController(new ApiClient(), (state) => {
  // error banner
  if (state.error) {
    banner.textContent = state.error;
    banner.style.display = "block";
  } else {
    banner.style.display = "none";
  }

  // viewport follows the loaded cell extent
  if (state.cells && state.cells.features.length > 0) {
    let latMin = 90, latMax = -90, lonMin = 180, lonMax = -180;
    for (const f of state.cells.features) {
      const [lon, lat] = f.geometry.coordinates;
      latMin = Math.min(latMin, lat);
      latMax = Math.max(latMax, lat);
      lonMin = Math.min(lonMin, lon);
      lonMax = Math.max(lonMax, lon);
    }
    viewport = {
      bounds: paddedBounds({
        lat_min: latMin, lat_max: latMax,
        lon_min: lonMin, lon_max: lonMax,
      }),
      width: canvas.width,
      height: canvas.height,
    };
  } else if (!state.cells) {
    viewport = null;
  }

  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (viewport) {
    drawAxes(ctx, viewport);
    if (state.showHeat && state.grid) drawHeat(ctx, viewport, state.grid);
    if (state.cells) drawCells(ctx, viewport, state.cells.features);
    if (state.candidate)
      drawRect(ctx, viewport, state.candidate, state.commitStatus === "saved");
  }

  const display = controller.displayNumbers();
  numbers.textContent = display
    ? `area ${display.area} · cells ${display.cells} · samples ${display.samples}`
    : "draw a rectangle to probe";
  commitState.textContent =
    state.commitStatus === "saved" ? "demarcation saved" : "";
});

// rectangle drag gesture
let dragStart: [number, number] | null = null;

const gestureRect = (ev: MouseEvent): Rect | null => {
  if (!dragStart || !viewport) return null;
  const box = canvas.getBoundingClientRect();
  const [lat1, lon1] = toLatLon(viewport, dragStart[0], dragStart[1]);
  const [lat2, lon2] = toLatLon(
    viewport,
    ev.clientX - box.left,
    ev.clientY - box.top,
  );
  return normalizeDrag(lat1, lon1, lat2, lon2);
};

canvas.addEventListener("mousedown", (ev) => {
  const box = canvas.getBoundingClientRect();
  dragStart = [ev.clientX - box.left, ev.clientY - box.top];
});
canvas.addEventListener("mousemove", (ev) => {
  const rect = gestureRect(ev);
  if (rect) controller.updateCandidate(rect);
});
window.addEventListener("mouseup", (ev) => {
  const rect = gestureRect(ev as MouseEvent);
  if (rect) controller.updateCandidate(rect);
  dragStart = null;
});

mnoSelect.addEventListener("change", () => {
  const mnc = Number(mnoSelect.value);
  if (!Number.isNaN(mnc)) void controller.selectMno(mnc);
});
$("btn-heat").addEventListener("click", () => void controller.toggleHeat());
$("btn-suggest").addEventListener("click", () => void controller.suggest());
$("btn-commit").addEventListener("click", () => {
  const note = $<HTMLInputElement>("commit-note").value;
  void controller.commit(note);
});

void controller.loadMnos().then(() => {
  mnoSelect.innerHTML = "";
  for (const m of controller.state.mnos) {
    const opt = document.createElement("option");
    opt.value = String(m.mnc);
    opt.textContent = `${m.label} (MNC ${m.mnc})`;
    mnoSelect.appendChild(opt);
  }
  const first = controller.state.mnos[0];
  if (first) void controller.selectMno(first.mnc);
});
