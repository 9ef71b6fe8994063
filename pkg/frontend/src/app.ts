import { ApiClient, EvModel, Plan, Station } from "./api.js";
import { drawScene } from "./canvas.js";
import { loadConfig } from "./config.js";
import { renderCompare, renderOutcome, showToast } from "./panels.js";
import { legendStops } from "./ramp.js";
import {
  Marker,
  Scene,
  fitViewport,
  hitTest,
  planScene,
  stationMarkers,
} from "./scene.js";
import { PlanOutcome, PlanSession, QueryState, alphaFromSlider, sliderFromAlpha } from "./state.js";

// Page wiring. All logic lives in the imported modules; this file only
// connects DOM controls to them.

interface Elements {
  canvas: HTMLCanvasElement;
  evSelect: HTMLSelectElement;
  socInput: HTMLInputElement;
  alphaSlider: HTMLInputElement;
  alphaValue: HTMLElement;
  planButton: HTMLButtonElement;
  pinButton: HTMLButtonElement;
  clearButton: HTMLButtonElement;
  resultPanel: HTMLElement;
  comparePanel: HTMLElement;
  legend: HTMLElement;
  status: HTMLElement;
  popup: HTMLElement;
  toastHost: HTMLElement;
}

function grab(): Elements {
  const byId = <T extends HTMLElement>(id: string) =>
    document.getElementById(id) as T;
  return {
    canvas: byId<HTMLCanvasElement>("map"),
    evSelect: byId<HTMLSelectElement>("ev"),
    socInput: byId<HTMLInputElement>("soc"),
    alphaSlider: byId<HTMLInputElement>("alpha"),
    alphaValue: byId<HTMLElement>("alpha-value"),
    planButton: byId<HTMLButtonElement>("plan"),
    pinButton: byId<HTMLButtonElement>("pin"),
    clearButton: byId<HTMLButtonElement>("clear-pin"),
    resultPanel: byId<HTMLElement>("result"),
    comparePanel: byId<HTMLElement>("compare"),
    legend: byId<HTMLElement>("legend"),
    status: byId<HTMLElement>("status"),
    popup: byId<HTMLElement>("popup"),
    toastHost: byId<HTMLElement>("toasts"),
  };
}

function renderLegend(host: HTMLElement): void {
  host.textContent = "";
  for (const stop of legendStops()) {
    const item = document.createElement("span");
    item.className = "legend-item";
    const swatch = document.createElement("span");
    swatch.className = "swatch";
    swatch.style.backgroundColor = stop.color;
    item.append(swatch, document.createTextNode(" " + stop.label));
    host.append(item);
  }
}

export async function boot(): Promise<void> {
  const els = grab();
  const config = await loadConfig();
  const client = new ApiClient(config.apiBaseUrl);
  const session = new PlanSession(client);

  let stations: Station[] = [];
  let evModels: EvModel[] = [];
  try {
    [stations, evModels] = await Promise.all([
      client.getStations(),
      client.getEvModels(),
    ]);
  } catch (err) {
    showToast(els.toastHost, `service unreachable: ${err}`);
    return;
  }

  for (const ev of evModels) {
    const option = document.createElement("option");
    option.value = ev.name;
    option.textContent = `${ev.name} (${ev.rated_range_mi} mi)`;
    els.evSelect.append(option);
  }
  renderLegend(els.legend);

  const state: QueryState = {
    origin: null,
    destination: null,
    ev: evModels[0]?.name ?? "",
    socStart: 0.8,
    alpha: 1.0,
  };
  els.alphaSlider.value = String(sliderFromAlpha(state.alpha));
  els.alphaValue.textContent = state.alpha.toFixed(2);

  const vp = fitViewport(stations, els.canvas.width, els.canvas.height);
  const baseMarkers = stationMarkers(stations, vp);
  let scene: Scene = { markers: baseMarkers, routes: [] };
  let pinned: PlanOutcome | null = null;
  const ctx = els.canvas.getContext("2d");
  const paint = () => ctx && drawScene(ctx, scene);
  paint();

  const statusLine = () => {
    const o = state.origin
      ? `${state.origin.lat.toFixed(3)}, ${state.origin.lon.toFixed(3)}`
      : "click map";
    const d = state.destination
      ? `${state.destination.lat.toFixed(3)}, ${state.destination.lon.toFixed(3)}`
      : "click map";
    els.status.textContent = `origin: ${o} | destination: ${d}`;
  };
  statusLine();

  // First click sets the origin, second the destination, third starts over.
  els.canvas.addEventListener("click", (event) => {
    const rect = els.canvas.getBoundingClientRect();
    const x = event.clientX - rect.left;
    const y = event.clientY - rect.top;
    const marker = hitTest(scene.markers, x, y);
    if (marker) {
      els.popup.textContent = marker.popup.join(" | ");
      return;
    }
    const point = unprojectClick(x, y, vp, stations);
    if (!state.origin || (state.origin && state.destination)) {
      state.origin = point;
      state.destination = null;
    } else {
      state.destination = point;
    }
    statusLine();
  });

  const applyOutcome = (outcome: PlanOutcome | null) => {
    if (!outcome) return;
    els.resultPanel.textContent = "";
    els.resultPanel.append(renderOutcome(outcome));
    if (outcome.kind === "plan") {
      scene = routeScene(outcome.plan, baseMarkers, vp);
    } else {
      scene = { markers: baseMarkers, routes: [] };
      if (outcome.kind === "unreachable") {
        showToast(els.toastHost, outcome.detail);
      }
    }
    paint();
    if (pinned) {
      els.comparePanel.textContent = "";
      els.comparePanel.append(renderCompare(pinned, outcome));
    }
  };

  const submit = () => {
    state.ev = els.evSelect.value;
    state.socStart = Number(els.socInput.value);
    state.alpha = alphaFromSlider(Number(els.alphaSlider.value));
    els.alphaValue.textContent = state.alpha.toFixed(2);
    void session.submit(state).then(applyOutcome);
  };

  els.planButton.addEventListener("click", submit);
  els.alphaSlider.addEventListener("change", submit);
  els.pinButton.addEventListener("click", () => {
    pinned = session.current;
    if (pinned) {
      els.comparePanel.textContent = "";
      els.comparePanel.append(renderCompare(pinned, pinned));
    }
  });
  els.clearButton.addEventListener("click", () => {
    pinned = null;
    els.comparePanel.textContent = "";
  });
}

function routeScene(plan: Plan, base: Marker[], vp: ReturnType<typeof fitViewport>): Scene {
  const overlay = planScene(plan, vp);
  return { markers: [...base, ...overlay.markers], routes: overlay.routes };
}

// Invert the viewport fit by solving the two linear equations the forward
// projection uses; anchored on the first station to recover the constants.
function unprojectClick(
  x: number,
  y: number,
  vp: { toXY(lat: number, lon: number): [number, number] },
  stations: Station[],
): { lat: number; lon: number } {
  if (stations.length === 0) return { lat: 0, lon: 0 };
  const ref = stations[0];
  const [rx, ry] = vp.toXY(ref.lat, ref.lon);
  const [rx1, ry1] = vp.toXY(ref.lat + 0.01, ref.lon + 0.01);
  const dxPerLon = (rx1 - rx) / 0.01;
  const dyPerLat = (ry1 - ry) / 0.01;
  return {
    lat: ref.lat + (y - ry) / dyPerLat,
    lon: ref.lon + (x - rx) / dxPerLon,
  };
}

if (typeof document !== "undefined" && document.getElementById("map")) {
  void boot();
}
