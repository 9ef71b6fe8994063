// Typed client for the chargenet HTTP service. Every shape below mirrors a
// response body one-to-one; the UI never derives numbers of its own.

export interface Station {
  id: string;
  lat: number;
  lon: number;
  ports: number;
  power_kw: number;
  wait_min: number;
}

export interface EvModel {
  name: string;
  battery_kwh: number;
  rated_range_mi: number;
  soc_min: number;
  soc_cv: number;
  cv_tau_min: number;
  cc_range_mi: number;
}

export interface LatLon {
  lat: number;
  lon: number;
}

export interface PlanRequest {
  from: LatLon;
  to: LatLon;
  ev: string;
  soc_start: number;
  alpha: number;
}

export interface PlanStop {
  station_id: string;
  arrive_soc: number;
  depart_soc: number;
  wait_min: number;
  charge_min: number;
}

export interface PlanLeg {
  from: string;
  to: string;
  dist_mi: number;
  time_min: number;
}

export interface PlanTotals {
  travel_min: number;
  wait_min: number;
  charge_min: number;
  total_min: number;
}

export interface LineStringGeometry {
  type: "LineString";
  coordinates: [number, number][];
}

export interface PointGeometry {
  type: "Point";
  coordinates: [number, number];
}

export interface PlanFeature {
  type: "Feature";
  geometry: LineStringGeometry | PointGeometry;
  properties: Record<string, unknown>;
}

export interface PlanGeojson {
  type: "FeatureCollection";
  features: PlanFeature[];
}

export interface Plan {
  alpha: number;
  objective: string;
  objective_value: number;
  stops: PlanStop[];
  legs: PlanLeg[];
  totals: PlanTotals;
  geojson: PlanGeojson;
}

interface ErrorBody {
  error: string;
  detail: string;
}

/** Service-reported failure: carries the machine-readable error code. */
export class ApiError extends Error {
  status: number;
  code: string;

  constructor(status: number, body: ErrorBody) {
    super(body.detail);
    this.status = status;
    this.code = body.error;
  }

  get infeasible(): boolean {
    return this.status === 422;
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private baseUrl: string;
  private fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(this.baseUrl + path, init);
    const body = await response.json();
    if (!response.ok) {
      throw new ApiError(response.status, body as ErrorBody);
    }
    return body as T;
  }

  getStations(): Promise<Station[]> {
    return this.request<Station[]>("/stations");
  }

  getEvModels(): Promise<EvModel[]> {
    return this.request<EvModel[]>("/ev-models");
  }

  postPlan(req: PlanRequest): Promise<Plan> {
    return this.request<Plan>("/plan", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(req),
    });
  }
}
