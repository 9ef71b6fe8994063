import { Plan, PlanTotals } from "./api.js";
import { PlanOutcome } from "./state.js";

// DOM fragments for the side panel. Every figure shown is copied from a
// service response field; the raw value also lands in a data attribute so
// fidelity can be checked without parsing display text.

const TOTAL_FIELDS: [keyof PlanTotals, string][] = [
  ["travel_min", "travel"],
  ["wait_min", "wait"],
  ["charge_min", "charge"],
  ["total_min", "total"],
];

function row(label: string, text: string, raw?: number): HTMLElement {
  const tr = document.createElement("tr");
  const th = document.createElement("th");
  th.textContent = label;
  const td = document.createElement("td");
  td.textContent = text;
  if (raw !== undefined) {
    td.dataset.raw = String(raw);
    td.dataset.field = label;
  }
  tr.append(th, td);
  return tr;
}

export function renderTotals(plan: Plan): HTMLElement {
  const box = document.createElement("div");
  box.className = "totals";
  const route = document.createElement("p");
  route.className = "route-line";
  route.textContent =
    plan.stops.length === 0
      ? "direct (no charging stop)"
      : "via " + plan.stops.map((s) => s.station_id).join(" > ");
  const table = document.createElement("table");
  for (const [field, label] of TOTAL_FIELDS) {
    const value = plan.totals[field];
    table.append(row(label, `${value.toFixed(1)} min`, value));
  }
  box.append(route, table);
  return box;
}

export function renderOutcome(outcome: PlanOutcome): HTMLElement {
  if (outcome.kind === "plan") {
    return renderTotals(outcome.plan);
  }
  const box = document.createElement("div");
  box.className = outcome.kind === "infeasible" ? "infeasible" : "query-error";
  box.textContent = outcome.detail;
  return box;
}

export interface CompareDeltas {
  travel_min: number;
  wait_min: number;
  charge_min: number;
  total_min: number;
}

export function compareDeltas(a: Plan, b: Plan): CompareDeltas {
  return {
    travel_min: b.totals.travel_min - a.totals.travel_min,
    wait_min: b.totals.wait_min - a.totals.wait_min,
    charge_min: b.totals.charge_min - a.totals.charge_min,
    total_min: b.totals.total_min - a.totals.total_min,
  };
}

const sign = (x: number) => (x > 0 ? "+" : "");

/**
 * Side-by-side totals for two outcomes with a delta row (B minus A). If
 * either side has no plan the delta row is replaced by its diagnostic.
 */
export function renderCompare(a: PlanOutcome, b: PlanOutcome): HTMLElement {
  const box = document.createElement("div");
  box.className = "compare";
  const columns = document.createElement("div");
  columns.className = "compare-columns";
  columns.append(renderOutcome(a), renderOutcome(b));
  box.append(columns);
  if (a.kind === "plan" && b.kind === "plan") {
    const deltas = compareDeltas(a.plan, b.plan);
    const table = document.createElement("table");
    table.className = "delta-row";
    for (const [field, label] of TOTAL_FIELDS) {
      const d = deltas[field];
      table.append(row(`Δ${label}`, `${sign(d)}${d.toFixed(1)} min`, d));
    }
    box.append(table);
  } else {
    const note = document.createElement("p");
    note.className = "delta-unavailable";
    const detail =
      a.kind !== "plan" ? a.detail : b.kind !== "plan" ? b.detail : "";
    note.textContent = `no delta: ${detail}`;
    box.append(note);
  }
  return box;
}

/** Non-blocking notice; dismissed by click or after a few seconds. */
export function showToast(host: HTMLElement, message: string): HTMLElement {
  const toast = document.createElement("div");
  toast.className = "toast";
  toast.setAttribute("role", "status");
  toast.textContent = message;
  toast.addEventListener("click", () => toast.remove());
  setTimeout(() => toast.remove(), 6000);
  host.append(toast);
  return toast;
}
