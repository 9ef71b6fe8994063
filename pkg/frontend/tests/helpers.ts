import { readFileSync } from "node:fs";
import { FetchLike } from "../src/api.js";

// Fixtures are recorded service responses (scripts/record_ui_fixtures.py in
// the repository root regenerates them). Tests replay them through a fake
// fetch so the suite needs no running server.

export interface Recorded {
  status: number;
  body: unknown;
}

export function recorded(name: string): Recorded {
  const url = new URL(`./fixtures/${name}.json`, import.meta.url);
  return JSON.parse(readFileSync(url, "utf-8")) as Recorded;
}

export function asResponse(rec: Recorded): Response {
  return {
    ok: rec.status >= 200 && rec.status < 300,
    status: rec.status,
    json: async () => rec.body,
  } as unknown as Response;
}

export interface SentRequest {
  url: string;
  init?: RequestInit;
}

/** Routes "METHOD /path" to a recording and logs every request sent. */
export function serviceMock(
  routes: Record<string, Recorded>,
): { fetch: FetchLike; sent: SentRequest[] } {
  const sent: SentRequest[] = [];
  const fetchImpl: FetchLike = async (url, init) => {
    sent.push({ url, init });
    const method = init?.method ?? "GET";
    const path = new URL(url).pathname;
    const rec = routes[`${method} ${path}`];
    if (!rec) {
      throw new TypeError(`no route for ${method} ${path}`);
    }
    return asResponse(rec);
  };
  return { fetch: fetchImpl, sent };
}

/** Fetch whose responses resolve only when the test releases them. */
export function deferredFetch(): {
  fetch: FetchLike;
  release: (index: number, rec: Recorded) => void;
  pendingCount: () => number;
} {
  const pending: Array<(response: Response) => void> = [];
  const fetchImpl: FetchLike = () =>
    new Promise((resolve) => {
      pending.push(resolve);
    });
  return {
    fetch: fetchImpl,
    release: (index, rec) => pending[index](asResponse(rec)),
    pendingCount: () => pending.length,
  };
}
