import { ApiClient, ApiError, LatLon, Plan, PlanRequest } from "./api.js";

export interface QueryState {
  origin: LatLon | null;
  destination: LatLon | null;
  ev: string;
  socStart: number;
  alpha: number;
}

export type PlanOutcome =
  | { kind: "plan"; plan: Plan }
  | { kind: "infeasible"; detail: string }
  | { kind: "invalid"; detail: string }
  | { kind: "unreachable"; detail: string };

// The slider runs 0..100. Position 0 means wait-blind planning (alpha 0);
// the rest of the track is log-spaced from 0.1 up to 10 so both "waits are
// cheap" and "waits are 10x travel" are reachable without a huge knob.
export function alphaFromSlider(pos: number): number {
  if (pos <= 0) return 0;
  const t = Math.min(pos, 100) / 100;
  return Math.pow(10, -1 + 2 * t);
}

export function sliderFromAlpha(alpha: number): number {
  if (alpha <= 0) return 0;
  const t = (Math.log10(alpha) + 1) / 2;
  return Math.round(Math.min(Math.max(t, 0.01), 1) * 100);
}

/**
 * Owns the latest plan and enforces response ordering: each submit takes a
 * sequence number, and a response only lands if no newer submit has been
 * issued since. A slow early response can therefore never clobber the plan
 * belonging to the parameters currently on screen.
 */
export class PlanSession {
  private client: ApiClient;
  private issued = 0;
  current: PlanOutcome | null = null;

  constructor(client: ApiClient) {
    this.client = client;
  }

  async submit(state: QueryState): Promise<PlanOutcome | null> {
    if (!state.origin || !state.destination) {
      return null;
    }
    const seq = ++this.issued;
    const req: PlanRequest = {
      from: state.origin,
      to: state.destination,
      ev: state.ev,
      soc_start: state.socStart,
      alpha: state.alpha,
    };
    let outcome: PlanOutcome;
    try {
      const plan = await this.client.postPlan(req);
      outcome = { kind: "plan", plan };
    } catch (err) {
      if (err instanceof ApiError) {
        outcome = err.infeasible
          ? { kind: "infeasible", detail: err.message }
          : { kind: "invalid", detail: err.message };
      } else {
        outcome = { kind: "unreachable", detail: String(err) };
      }
    }
    if (seq !== this.issued) {
      return null; // stale: a newer request was issued while this one ran
    }
    this.current = outcome;
    return outcome;
  }
}
