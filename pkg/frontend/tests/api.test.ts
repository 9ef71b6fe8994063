import { describe, expect, test } from "vitest";
import { ApiClient, ApiError, Plan, PlanRequest, Station } from "../src/api.js";
import { recorded, serviceMock } from "./helpers.js";

const BASE = "http://svc.test";

const PLAN_REQ: PlanRequest = {
  from: { lat: 32.9, lon: -97.6 },
  to: { lat: 32.9, lon: -93.9838 },
  ev: "lr281",
  soc_start: 0.8,
  alpha: 1.0,
};

describe("ApiClient", () => {
  test("parses the station list", async () => {
    const mock = serviceMock({ "GET /stations": recorded("stations_metro") });
    const client = new ApiClient(BASE, mock.fetch);
    const stations = await client.getStations();
    expect(stations.length).toBe(8);
    const bMain = stations.find((s) => s.id === "b-main") as Station;
    expect(bMain.wait_min).toBe(15.0);
    expect(bMain.ports).toBe(2);
    expect(mock.sent[0].url).toBe(`${BASE}/stations`);
  });

  test("parses the vehicle catalog", async () => {
    const mock = serviceMock({ "GET /ev-models": recorded("ev_models") });
    const client = new ApiClient(BASE, mock.fetch);
    const models = await client.getEvModels();
    expect(models.length).toBeGreaterThan(0);
    for (const m of models) {
      expect(m.cc_range_mi).toBeGreaterThan(0);
      expect(m.soc_min).toBeLessThan(m.soc_cv);
    }
  });

  test("posts a plan request and returns the body unchanged", async () => {
    const rec = recorded("plan_metro");
    const mock = serviceMock({ "POST /plan": rec });
    const client = new ApiClient(BASE, mock.fetch);
    const plan = await client.postPlan(PLAN_REQ);
    expect(plan).toEqual(rec.body as Plan);
    const sentBody = JSON.parse(String(mock.sent[0].init?.body));
    expect(sentBody).toEqual(PLAN_REQ);
  });

  test("maps 422 to an infeasible ApiError carrying the detail", async () => {
    const rec = recorded("plan_infeasible");
    const mock = serviceMock({ "POST /plan": rec });
    const client = new ApiClient(BASE, mock.fetch);
    const err = await client.postPlan(PLAN_REQ).catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.infeasible).toBe(true);
    expect(err.code).toBe("infeasible");
    expect(err.message).toBe((rec.body as { detail: string }).detail);
  });

  test("maps 400 to a non-infeasible ApiError", async () => {
    const mock = serviceMock({ "POST /plan": recorded("plan_invalid") });
    const client = new ApiClient(BASE, mock.fetch);
    const err = await client.postPlan(PLAN_REQ).catch((e) => e);
    expect(err).toBeInstanceOf(ApiError);
    expect(err.infeasible).toBe(false);
    expect(err.code).toBe("invalid_query");
  });

  test("propagates transport failures as plain errors", async () => {
    const client = new ApiClient(BASE, async () => {
      throw new TypeError("connection refused");
    });
    const err = await client.getStations().catch((e) => e);
    expect(err).toBeInstanceOf(TypeError);
    expect(err).not.toBeInstanceOf(ApiError);
  });
});
